from __future__ import annotations

import random

import oracles
from epminor.graph_core import Graph, RootedGraph, grid_graph
from epminor.pack_cover import (
    check_duality,
    covering_number,
    has_deletion_set_of_size,
    is_deletion_set,
    is_irrelevant,
    max_disjoint,
    packing_number,
)
from epminor.patterns import complete, cycle, parse_pattern
from epminor.sweeps import random_rooted


def test_grid_corner_members():
    g = grid_graph(3, 3)
    rg = RootedGraph(g, (frozenset({0}), frozenset({2}), frozenset({6}), frozenset({8})))
    assert packing_number(rg, complete(1), 2).nu == 2
    cv = covering_number(rg, complete(1), 2)
    # two surviving corners are always joined, so all but one must go
    assert cv.tau == 3
    assert is_deletion_set(rg, complete(1), 2, cv.deletion_set)
    assert has_deletion_set_of_size(rg, complete(1), 2, 2) is None


def test_too_few_members_means_no_models():
    rg = RootedGraph(grid_graph(2, 2), (frozenset({0}),))
    assert packing_number(rg, complete(1), 2).nu == 0
    assert covering_number(rg, complete(1), 2).tau == 0


def test_cycle_packing_in_disjoint_triangles():
    tri = [(0, 1), (1, 2), (0, 2)]
    g = Graph.from_edges(range(9), tri + [(u + 3, v + 3) for u, v in tri] + [(u + 6, v + 6) for u, v in tri])
    rg = RootedGraph(g, (frozenset(range(9)),))
    assert packing_number(rg, cycle(3), 1).nu == 3
    assert covering_number(rg, cycle(3), 1).tau == 3


def test_max_disjoint_picks_largest_family():
    sets = [frozenset(s) for s in ({0, 1}, {1, 2}, {2, 3}, {3, 4})]
    best = max_disjoint(sets)
    assert len(best) == 2
    assert all(a.isdisjoint(b) for a in best for b in best if a is not b)


def test_numbers_match_brute_force():
    rnd = random.Random(17)
    for _ in range(120):
        rg = random_rooted(rnd, rnd.randint(1, 6), max_members=3)
        spec = rnd.choice(["K1", "K2", "P3", "2K1"])
        h = parse_pattern(spec)
        ell = rnd.randint(1, 2)
        pure = rnd.random() < 0.5
        z = [sorted(x) for x in rg.z]
        fn = oracles.pure_images if pure else oracles.hzl_images
        images = fn(rg.graph.vertices, rg.graph.edges, z, h.vertices, h.edges, ell)
        assert packing_number(rg, h, ell, pure=pure).nu == oracles.packing_number(images)
        assert covering_number(rg, h, ell, pure=pure).tau == oracles.covering_number(rg.graph.vertices, images)


def test_irrelevant_vertex_on_a_path():
    # members at both ends of a path with a pendant vertex hanging off the middle
    g = Graph.from_edges(range(6), [(i, i + 1) for i in range(4)] + [(2, 5)])
    rg = RootedGraph(g, (frozenset({0}), frozenset({4})))
    assert is_irrelevant(rg, complete(1), 2, 5)
    assert not is_irrelevant(rg, complete(1), 2, 2)


def test_check_duality_reports():
    rg = RootedGraph(grid_graph(3, 3), (frozenset({0}), frozenset({8})))
    rep = check_duality(rg, complete(1), 2, 2, lambda k: 2 * k - 2, exact=True)
    assert rep.status == "ok" and rep.nu == 1 and rep.tau == 1
    # an impossible bound turns into a violation
    rep = check_duality(rg, complete(1), 2, 2, lambda k: 0)
    assert rep.status == "violation"
    assert rep.to_json()["status"] == "violation"
