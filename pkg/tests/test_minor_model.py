from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from epminor.graph_core import Graph, RootedGraph, grid_graph
from epminor.minor_model import (
    Budget,
    BudgetExceeded,
    ModelFunction,
    ModelOracle,
    find_hzl_model,
    find_minor_model,
    find_pure_model,
    is_minor,
    validate_hzl_model,
    validate_model_function,
    validate_pure_witness,
)
from epminor.patterns import complete, cycle, parse_pattern
from epminor.sweeps import random_rooted

PATTERNS = ["K1", "K2", "2K1", "P3", "K1+K2"]


def _oracle_images(rg, h, ell, pure):
    z = [sorted(x) for x in rg.z]
    fn = oracles.pure_images if pure else oracles.hzl_images
    return fn(rg.graph.vertices, rg.graph.edges, z, h.vertices, h.edges, ell)


def test_validator_accepts_grid_model_of_k4():
    g = grid_graph(3, 3)
    eta = find_minor_model(complete(4), g)
    assert eta is not None
    assert validate_model_function(g, complete(4), eta) == []


def test_validator_rejects_overlapping_branch_sets():
    g = grid_graph(2, 2)
    h = complete(2)
    bad = ModelFunction({0: frozenset({0, 1}), 1: frozenset({1, 3})}, {(0, 1): (0, 1)})
    assert validate_model_function(g, h, bad)


def test_minor_relation_on_small_cases():
    assert is_minor(cycle(4), grid_graph(2, 2))
    assert not is_minor(complete(5), grid_graph(3, 3))
    assert not is_minor(complete(3), Graph.from_edges(range(4), [(0, 1), (1, 2), (2, 3)]))


def test_model_function_json_round_trip():
    g = grid_graph(3, 3)
    eta = find_minor_model(complete(3), g)
    assert ModelFunction.from_json(eta.to_json()) == eta


def test_hzl_model_meets_enough_members():
    rg = RootedGraph(grid_graph(3, 3), (frozenset({0}), frozenset({8}), frozenset({2})))
    eta = find_hzl_model(rg, complete(2), 3)
    assert eta is not None
    assert validate_hzl_model(rg, complete(2), 3, eta) == []
    assert find_hzl_model(rg, complete(2), 4) is None


def test_pure_model_assigns_members_to_components():
    rg = RootedGraph(grid_graph(1, 5), (frozenset({0}), frozenset({4})))
    h = parse_pattern("2K1")
    w = find_pure_model(rg, h, 2)
    assert w is not None
    assert validate_pure_witness(rg, h, 2, w) == []
    # a single vertex hosts one component with both members, but no ordinary 2K1 model
    tiny = RootedGraph(grid_graph(1, 1), (frozenset({0}), frozenset({0})))
    w = find_pure_model(tiny, h, 2)
    assert w is not None and w.component_subset == (0,)
    assert find_hzl_model(tiny, h, 2) is None


def test_budget_is_enforced():
    rg = RootedGraph(grid_graph(6, 6), (frozenset({0}), frozenset({35})))
    with pytest.raises(BudgetExceeded):
        ModelOracle(rg, complete(4), 2, budget=Budget(5)).exists()


@pytest.mark.parametrize("pure", [False, True])
def test_existence_and_minimal_supports_match_brute_force(pure):
    rnd = random.Random(5 + pure)
    for _ in range(120):
        rg = random_rooted(rnd, rnd.randint(1, 6), max_members=3)
        h = parse_pattern(rnd.choice(PATTERNS))
        ell = rnd.randint(1, 3)
        images = _oracle_images(rg, h, ell, pure)
        oracle = ModelOracle(rg, h, ell, pure=pure)
        assert oracle.exists() == bool(images)
        ms = oracle.minimal_support()
        if images:
            # the library support is a genuine minimal image
            assert ms in set(oracles.minimal(images))
        else:
            assert ms is None


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(PATTERNS), st.integers(1, 3))
def test_realized_models_validate(seed, spec, ell):
    rnd = random.Random(seed)
    rg = random_rooted(rnd, rnd.randint(1, 7), max_members=4)
    h = parse_pattern(spec)
    eta = find_hzl_model(rg, h, ell)
    if eta is not None:
        assert validate_hzl_model(rg, h, ell, eta) == []
    w = find_pure_model(rg, h, ell)
    if w is not None:
        assert validate_pure_witness(rg, h, ell, w) == []
        # for connected patterns a pure model is an ordinary one
        if len(h.components()) == 1:
            assert eta is not None
