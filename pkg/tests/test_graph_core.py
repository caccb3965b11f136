from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epminor.graph_core import (
    Graph,
    GraphError,
    RootedGraph,
    Separation,
    disjoint_union,
    grid_graph,
    multiset_size,
    restrict_multiset,
    shortest_path_within,
    subtract_multiset,
    validate_separation,
)


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(range(n), edges)


def test_grid_ids_and_coordinates():
    g = grid_graph(2, 3)
    assert g.n == 6 and g.m == 7
    assert g.grid_vertex(2, 1) == 3
    assert g.coords[5] == (2, 3)
    assert g.row(1) == [0, 1, 2]
    assert g.column(3) == [2, 5]
    assert g.grid_shape == (2, 3)


def test_grid_offset():
    g = grid_graph(2, 2, offset=10)
    assert g.vertices == (10, 11, 12, 13)
    assert g.grid_vertex(2, 2) == 13


def test_grid_rejects_bad_dimensions():
    with pytest.raises(GraphError):
        grid_graph(0, 3)


def test_induced_and_remove():
    g = grid_graph(3, 3)
    sub = g.induced([0, 1, 3, 4])
    assert sub.m == 4
    assert g.remove([4]).m == g.m - 4


def test_components_ordered_by_min_vertex():
    g = Graph.from_edges(range(5), [(3, 4), (0, 2)])
    assert g.components() == [frozenset({0, 2}), frozenset({1}), frozenset({3, 4})]
    assert not g.is_connected()


def test_shortest_path_within():
    g = grid_graph(3, 3)
    p = shortest_path_within(g.adj, g.vertex_set - {4}, [0], [8])
    assert p[0] == 0 and p[-1] == 8 and len(p) == 5 and 4 not in p


def test_disjoint_union_relabels_sequentially():
    u = disjoint_union([grid_graph(2, 2), Graph.from_edges([7, 9], [(7, 9)])])
    assert u.graph.vertices == tuple(range(6))
    assert u.relabel[1] == {7: 4, 9: 5}
    assert u.origin[5] == (1, 9)
    assert u.graph.m == 5


def test_multisets_ignore_empty_members():
    z = (frozenset({1, 2}), frozenset(), frozenset({2}))
    assert multiset_size(z) == 2
    assert subtract_multiset(z, {2}) == (frozenset({1}), frozenset(), frozenset())
    assert restrict_multiset(z, {1}) == (frozenset({1}), frozenset(), frozenset())


def test_rooted_graph_rejects_foreign_members():
    with pytest.raises(GraphError):
        RootedGraph(grid_graph(2, 2), ({9},))


def test_trivial_separation():
    g = grid_graph(2, 2)
    sep = Separation.trivial(g)
    assert validate_separation(g, sep) == (0, [])
    assert sep.b_only == g.vertex_set


def test_separation_violations_are_named():
    g = grid_graph(2, 2)
    sep = Separation(frozenset({0, 1}), frozenset({2, 3}), frozenset({(0, 1)}), frozenset({(2, 3)}))
    order, problems = validate_separation(g, sep)
    assert order is None
    assert any("E(A)∪E(B)" in p for p in problems)


@settings(max_examples=150, deadline=None)
@given(graphs(), st.data())
def test_vertex_sides_give_a_separation(g, data):
    # any cover of V(G) without edges between the private parts is a separation
    comps = g.components()
    pick = data.draw(st.lists(st.booleans(), min_size=len(comps), max_size=len(comps)))
    a = set().union(*(c for c, p in zip(comps, pick) if p))
    extra = data.draw(st.sets(st.sampled_from(g.vertices)))
    a_side = a | extra
    b_side = (g.vertex_set - a) | extra
    sep = Separation.from_vertex_sides(g, a_side, b_side)
    order, problems = validate_separation(g, sep)
    assert problems == []
    assert order == len(a_side & b_side)
