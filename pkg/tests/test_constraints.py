import pytest
from hypothesis import given, settings, strategies as st

from floerforge import catalog
from floerforge.botany import module_of
from floerforge.complexes import BigradedModule, ComponentData, Grading, symmetry_image
from floerforge.constraints import (
    FAIL,
    INAPPLICABLE,
    PASS,
    RULE_ORDER,
    LegendrianData,
    check_braid_axis,
    check_braid_polytope,
    check_component_degeneration,
    check_fibered_top,
    check_global_degeneration,
    check_hfk_symmetry,
    check_loss_bound,
    check_parity_rules,
    check_symmetry,
    exact_triangle_bounds,
    fibered_loss_grading,
    gauntlet,
)
from floerforge.decomposition import Decomposition

T28 = catalog.lookup("T(2,8)")
CD28 = ComponentData.two_component(4, unknotted=(True, True))
UNKNOT = {(0, 0): 1}


def test_symmetry():
    assert check_symmetry(T28.module).verdict == PASS
    assert check_symmetry(T28.module, exchange=True).verdict == PASS
    assert check_symmetry(BigradedModule({}, 2)).verdict == PASS
    ranks = dict(T28.module.ranks)
    ranks[Grading.of(3, 0, -3)] = 1
    rep = check_symmetry(BigradedModule(ranks, 2))
    assert rep.verdict == FAIL and "(3, 0; -3)" in rep.witness


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(-8, 8)), max_size=6))
def test_symmetrized_modules_pass(points):
    gens = [Grading((2 * a, 2 * b), 2 * m) for a, b, m in points]
    gens += [symmetry_image(g) for g in gens]
    assert check_symmetry(BigradedModule.from_gradings(gens, 2)).verdict == PASS


def test_component_degeneration():
    rep = check_component_degeneration(T28.module, CD28, 0, UNKNOT)
    assert rep.verdict == PASS and rep.data["shift"] == 2
    small = BigradedModule.from_gradings([Grading.of(0, 0, 0), Grading.of(0, 0, -1)])
    trefoil = catalog.lookup("T(2,3)").hfk
    assert check_component_degeneration(small, ComponentData.two_component(0), 0, trefoil).verdict == FAIL
    hopf = catalog.lookup("T(2,2)")
    for i in (0, 1):
        assert check_component_degeneration(hopf.module, hopf.components, i, UNKNOT).verdict == PASS


def test_global_degeneration():
    assert check_global_degeneration(T28.hfk, 2).verdict == PASS
    rank4 = {(0, 3): 1, (0, 1): 2, (0, -1): 1}
    assert check_global_degeneration(rank4, 4).verdict == FAIL
    integer_coset = {(0, 0): 2, (0, -2): 2}
    rep = check_global_degeneration(integer_coset, 2)
    assert rep.verdict == FAIL and "Maslov" in rep.witness


def test_fibered_top():
    assert check_fibered_top(T28.hfk, True, -6, 2).verdict == PASS
    top2 = {(4, 1): 2, (-4, -7): 2}
    assert check_fibered_top(top2, True, -6, 2).verdict == FAIL
    assert check_fibered_top(T28.hfk, False, -6, 2).verdict == INAPPLICABLE


def test_braid_axis():
    for i in (0, 1):
        assert check_braid_axis(T28.module, CD28, i).data["braid_axis"]
    four = BigradedModule.from_gradings([Grading.of(1, 0, 0)] * 4 + [Grading.of(-1, 0, -2)] * 4)
    assert not check_braid_axis(four, None, 0).data["braid_axis"]
    split = catalog.lookup("unlink-2")
    assert not check_braid_axis(split.module, split.components, 0).data["braid_axis"]


def test_loss_bound():
    top = fibered_loss_grading(-6, 2)
    assert top == 8
    assert check_loss_bound(T28.hfk, n=2, alexander=top).verdict == PASS
    thin = {(2, 0): 1, (-2, -4): 1}
    assert check_loss_bound(thin, n=2, alexander=4).verdict == FAIL
    three = {(4, 0): 1, (2, -2): 1, (-2, -6): 1, (-4, -8): 1}
    assert check_loss_bound(three, n=3, alexander=0).verdict == FAIL
    assert check_loss_bound(T28.hfk).verdict == INAPPLICABLE
    ld = LegendrianData((1, 1), (0, 0), CD28)
    assert ld.alexander_doubled() == 10


def test_parity_rules():
    assert all(r.verdict == PASS for r in check_parity_rules(T28.module, CD28))
    odd = BigradedModule.from_gradings([Grading.of(1, 0, 0), Grading.of(-1, 0, -2), Grading.of(-1, 0, -2)])
    reps = check_parity_rules(odd)
    assert reps[0].rule == "parity-a" and reps[0].verdict == FAIL
    at_zero = BigradedModule.from_gradings([Grading.of(0, 0, 0), Grading.of(0, 0, -1)])
    d = [r for r in check_parity_rules(at_zero) if r.rule == "parity-d"][0]
    assert d.data["unlink"]
    assert check_hfk_symmetry(T28.hfk).verdict == PASS


def test_braid_polytope():
    assert check_braid_polytope(T28.module, CD28).verdict == PASS
    for x1 in ("B[-2][0,2] + B[-4][1,-1]", "B[-2][2,0] + B[-4][-1,1]"):
        m = module_of(Decomposition.parse(x1 + " + B[-6][-1,-1] + Y[-1]^1[3/2,3/2] + Y[0]^0[2,2]"))
        assert check_braid_polytope(m, CD28).verdict == FAIL
    hopf = catalog.lookup("T(2,2)")
    rep = check_braid_polytope(hopf.module, hopf.components)
    assert rep.verdict == INAPPLICABLE and "Hopf" in rep.witness


def _shift(h, dm):
    return {(a, m + dm): r for (a, m), r in h.items()}


def test_exact_triangle_pins_cable_ranks():
    plus = _shift(catalog.lookup("T(2,3)_{2,1}").hfk, 1)
    minus = _shift(catalog.lookup("T(2,3)_{2,-1}").hfk, -1)
    bounds = exact_triangle_bounds(plus, minus)
    # nothing above A=2, rank 2 forced there, two options at A=0
    assert max(bounds) == 4 and min(bounds) == -4
    assert bounds[4].forced and bounds[4].low == 2
    assert bounds[0].values() == [2, 4]
    assert bounds[-4] == bounds[4]
    loose = exact_triangle_bounds(plus, minus, maslov_aware=False)
    assert all(loose[a].low <= bounds[a].low for a in bounds)


def test_exact_triangle_trivial_cases():
    a = {(0, 0): 2, (2, 1): 1}
    bounds = exact_triangle_bounds(a, a)
    assert bounds[0].values() == [0, 2, 4] and bounds[2].values() == [0, 2]
    alone = exact_triangle_bounds(a, {})
    assert all(b.forced for b in alone.values())
    assert alone[0].low == 2 and alone[2].low == 1


def test_gauntlet():
    reps = gauntlet(T28.module, CD28)
    assert [r.verdict for r in reps if r.verdict == FAIL] == []
    assert [r.rule for r in gauntlet(T28.module, CD28, rules=("symmetry",))] == ["symmetry"]
    assert gauntlet(T28.module, CD28, rules=()) == []
    with pytest.raises(ValueError):
        gauntlet(T28.module, CD28, rules=("symmetry", "nonsense"))
    assert RULE_ORDER[0] == "parity"
