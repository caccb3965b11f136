from __future__ import annotations

import pytest

from epminor.counterexample import figure1_instance, negative_family, negative_threshold, verify_negative
from epminor.pack_cover import covering_number, packing_number
from epminor.patterns import complete, parse_pattern


def test_three_set_grid_small():
    rg = figure1_instance(3)
    g = rg.graph
    assert rg.z == (
        frozenset({g.grid_vertex(2, 1)}),
        frozenset({g.grid_vertex(1, 2)}),
        frozenset({g.grid_vertex(2, 3)}),
    )


def test_three_set_grid_rejects_tiny_order():
    with pytest.raises(ValueError):
        figure1_instance(1)


def test_three_set_grid_has_one_disjoint_model():
    assert packing_number(figure1_instance(4), complete(1), 3).nu == 1


def test_three_set_grid_cover_grows():
    # frozen from the covering oracle
    taus = [covering_number(figure1_instance(n), complete(1), 3).tau for n in (3, 4, 5)]
    assert taus == [1, 2, 3]


def test_family_connected_pattern_shape():
    inst = negative_family(complete(1), 3, 2)
    assert len(inst.components) == 1
    assert inst.rooted.graph.n == 64
    # three first-row blocks of width 2, two slack columns at the end
    assert [sorted(z) for z in inst.rooted.z] == [[0, 1], [2, 3], [4, 5]]


def test_family_two_components_shape():
    inst = negative_family(parse_pattern("2K1"), 4, 2)
    assert [len(c) for c in inst.components] == [64, 4]
    assert inst.rooted.graph.n == 68
    assert sum(1 for z in inst.rooted.z if z) == 4
    # the last member is the first row of the companion grid
    assert inst.rooted.z[-1] == frozenset({64, 65})


def test_family_many_components_shape():
    inst = negative_family(parse_pattern("5K1"), 8, 1)
    assert inst.t == 5
    big = inst.components[0]
    assert len(big) == (8 - 5 + 2) ** 2
    on_big = [z for z in inst.rooted.z if z <= big]
    assert len(on_big) == 4
    assert len(inst.components) - 1 == 4
    assert inst.provenance == {"t": 5, "l": 8, "n": 1, "x": 0}


def test_family_rejects_too_many_components():
    with pytest.raises(ValueError):
        negative_family(parse_pattern("2K1"), 3, 2)


def test_threshold_formula():
    assert negative_threshold(complete(1), 0) == 16
    assert negative_threshold(complete(1), 1) == (14 + 2) * 2 + 2


@pytest.mark.parametrize("n,x", [(3, 0), (4, 1)])
def test_both_clauses_hold(n, x):
    rep = verify_negative(negative_family(complete(1), 3, n, x), complete(1), 3, x)
    assert rep.ok and rep.nu == 1 and rep.clause_b
    assert rep.structural in (True, None)


def test_clause_b_fails_when_everything_can_go():
    inst = negative_family(complete(1), 3, 1)
    rep = verify_negative(inst, complete(1), 3, inst.rooted.graph.n)
    assert rep.clause_a and not rep.clause_b
    assert rep.blocking_set is not None


def test_structural_check_on_two_components():
    h = parse_pattern("2K1")
    rep = verify_negative(negative_family(h, 4, 1), h, 4, 0)
    assert rep.structural is True
    assert rep.nu == 1
