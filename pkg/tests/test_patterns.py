from __future__ import annotations

import pytest

from epminor.graph_core import GraphError
from epminor.patterns import complete, components_of, cycle, grid_host_order, parse_pattern, path


def test_presets():
    assert complete(3).m == 3
    assert path(4).m == 3
    assert cycle(4).m == 4
    with pytest.raises(GraphError):
        cycle(2)


@pytest.mark.parametrize(
    "spec,n,m,cc",
    [("K1", 1, 0, 1), ("2K1", 2, 0, 2), ("K2", 2, 1, 1), ("P3+K2", 5, 3, 2), ("2G2", 8, 8, 2), ("C4", 4, 4, 1)],
)
def test_parse_pattern(spec, n, m, cc):
    h = parse_pattern(spec)
    assert (h.n, h.m, len(h.components())) == (n, m, cc)


def test_parse_inline_json():
    h = parse_pattern('{"n": 3, "edges": [[0, 1]]}')
    assert h.n == 3 and h.m == 1


def test_parse_rejects_garbage():
    with pytest.raises(GraphError):
        parse_pattern("K")


def test_components_relabelled():
    comps = components_of(parse_pattern("K2+P3"))
    assert [c.vertices for c in comps] == [(0, 1), (0, 1, 2)]


@pytest.mark.parametrize("spec,order", [("K1", 1), ("K2", 2), ("2K1", 2), ("K4", 3), ("C4", 2), ("P3", 2)])
def test_grid_host_order(spec, order):
    # smallest grids hosting the pattern, found by exhaustive minor search
    assert grid_host_order(parse_pattern(spec)) == order
