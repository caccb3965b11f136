from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epminor.graph_core import Graph, RootedGraph, grid_graph
from epminor.rooted_grid import (
    GridModel,
    GridSeparation,
    RootedGridModel,
    Variant,
    copies_of_grid,
    models_from_rooted_grid,
    planted_rooted_grid,
    required_order,
    restrict_grid_model,
    rooted_grid_or_separation,
    validate_grid_model,
    validate_grid_separation,
    validate_rooted_grid_model,
)


def test_identity_model_is_valid():
    g = grid_graph(4, 5)
    m = GridModel.identity(g)
    assert validate_grid_model(g, m) == []
    assert m.order == 4
    assert m.branch(2, 3) == {g.grid_vertex(2, 3)}
    assert m.col_image(1) == set(g.column(1))


def test_restriction_rejects_large_sets():
    m = GridModel.identity(grid_graph(3, 3))
    with pytest.raises(ValueError):
        restrict_grid_model(m, [0, 4, 8])


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 7), st.data())
def test_restriction_avoids_the_deleted_set(n, data):
    g = grid_graph(n, n)
    m = GridModel.identity(g)
    s = data.draw(st.sets(st.sampled_from(g.vertices), max_size=n - 1))
    r = restrict_grid_model(m, s)
    assert (r.rows, r.cols) == (n - len(s), n - len(s))
    assert r.image.isdisjoint(s)
    assert validate_grid_model(g, r) == []
    # untouched columns survive whole
    for c in range(1, n + 1):
        col = m.col_image(c)
        if col.isdisjoint(s):
            assert col <= r.image


def test_required_order_and_copies():
    assert required_order(3, 2, 1) == 19
    assert copies_of_grid(2, 2).n == 8
    assert copies_of_grid(2, 2).m == 8


def test_members_on_the_top_row_give_a_rooted_grid():
    g = grid_graph(12, 12)
    rg = RootedGraph(g, (frozenset({0}), frozenset({11})))
    res = rooted_grid_or_separation(rg, GridModel.identity(g), 2, 1, 2)
    assert isinstance(res, RootedGridModel)
    assert validate_rooted_grid_model(rg, res, 1, 2) == []


def test_members_behind_a_cut_vertex_give_a_separation():
    g = grid_graph(12, 12)
    host = Graph.from_edges(range(147), list(g.edges) + [(0, 144), (144, 145), (145, 146)])
    rg = RootedGraph(host, (frozenset({145}), frozenset({146})))
    res = rooted_grid_or_separation(rg, GridModel.identity(g), 2, 1, 2)
    assert isinstance(res, GridSeparation)
    assert validate_grid_separation(rg, 12, 1, 2, res) == []
    assert res.separation.order == 1


def test_strict_mode_checks_the_size_bound():
    g = grid_graph(6, 6)
    rg = RootedGraph(g, (frozenset({0}), frozenset({5})))
    with pytest.raises(ValueError):
        rooted_grid_or_separation(rg, GridModel.identity(g), 2, 1, 2)


def test_reduced_variant_uses_one_copy_fewer():
    rg, model = planted_rooted_grid(required_order(1, 3, 2), 1, 3, [[0], [1], [2]])
    full, fm = models_from_rooted_grid(rg, model, 2, Variant.FULL)
    reduced, rm = models_from_rooted_grid(rg, model, 2, Variant.REDUCED)
    assert full == copies_of_grid(3, 2)
    assert reduced == copies_of_grid(2, 2)
    assert len(fm) == len(rm) == 1
