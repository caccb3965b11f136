from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epminor.graph_core import RootedGraph, Separation, grid_graph
from epminor.linkage import (
    Linkage,
    ZkPartition,
    find_zk_partition,
    linkage_or_separation,
    refine_partition,
    validate_linkage,
    validate_linkage_separation,
    validate_refined,
    validate_zk_partition,
)


def _brute_partition_exists(points, z, k):
    # assign every point a member containing it, at most k points per member
    choices = [[i for i, x in enumerate(z) if p in x] for p in points]
    for pick in product(*choices):
        if all(pick.count(i) <= k for i in set(pick)):
            return True
    return not points


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(0, 7), unique=True, max_size=6),
    st.lists(st.sets(st.integers(0, 7), max_size=5), min_size=1, max_size=4),
    st.integers(1, 3),
)
def test_partition_matches_brute_force(points, z, k):
    part = find_zk_partition(points, z, k)
    assert (part is not None) == _brute_partition_exists(points, [frozenset(x) for x in z], k)
    if part is not None:
        assert validate_zk_partition(points, z, k, part) == []


def test_partition_rejects_repeated_points():
    with pytest.raises(ValueError):
        find_zk_partition([1, 1], [{1}], 2)


def test_partition_validator_flags_oversized_class():
    bad = ZkPartition(((1, 2, 3),), (0,), 2)
    assert any("larger than k" in p for p in validate_zk_partition([1, 2, 3], [{1, 2, 3}], 2, bad))


def test_refinement_size_check():
    base = ZkPartition(((0, 1),), (0,), 2)
    with pytest.raises(ValueError):
        refine_partition([0, 1], [{0, 1}], 2, 2, base)


def test_refinement_l1():
    points = [4, 5, 6]
    base = find_zk_partition(points, [{4, 5, 6}], 3)
    rp = refine_partition(points, [{4, 5, 6}], 3, 1, base)
    assert validate_refined(points, [{4, 5, 6}], 3, 1, rp) == []
    assert rp.anchors == (None, None, None)


def test_grid_top_to_bottom_linkage():
    g = grid_graph(4, 4)
    rg = RootedGraph(g, (frozenset(g.row(1)[:2]), frozenset(g.row(1)[2:])))
    res = linkage_or_separation(rg, g.row(4), 2, 2)
    assert isinstance(res, Linkage)
    assert validate_linkage(rg, g.row(4), 2, 4, res) == []


def test_bottleneck_gives_separation():
    # two 3x3 grids joined through a single vertex
    a = grid_graph(3, 3)
    edges = list(a.edges) + [(u + 9, v + 9) for u, v in a.edges] + [(8, 9)]
    from epminor.graph_core import Graph

    g = Graph.from_edges(range(18), edges)
    rg = RootedGraph(g, (frozenset({0, 1, 2}), frozenset({3, 4, 5})))
    res = linkage_or_separation(rg, [15, 16, 17], 1, 2)
    assert isinstance(res, Separation)
    assert validate_linkage_separation(rg, [15, 16, 17], 1, 2, res) == []


def test_rejects_nonpositive_parameters():
    rg = RootedGraph(grid_graph(2, 2), (frozenset({0}),))
    with pytest.raises(ValueError):
        linkage_or_separation(rg, [3], 0, 1)
