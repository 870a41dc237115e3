import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from floerforge import catalog
from floerforge.botany import module_of
from floerforge.complexes import BigradedModule, Grading
from floerforge.decomposition import Decomposition
from floerforge.exactalg import LaurentPoly, laurent_mul, parse_laurent
from floerforge.invariants import (
    INDETERMINATE,
    LOWEST_TERM,
    STRICT_HOSTE,
    InvariantError,
    alexander_single,
    convex_hull,
    conway,
    conway_from_alexander,
    delta_spectrum,
    dual_thurston_axis_slice,
    euler_two_variable,
    floer_polytope,
    is_thin,
    linking_from_conway,
)


def skein_conway(k):
    """Conway polynomial of T(2,k) from the skein relation
    nabla(T(2,k)) = z nabla(T(2,k-1)) + nabla(T(2,k-2)), as {power: coeff}."""
    prev, cur = {}, {0: 1}  # T(2,0) is the unlink, T(2,1) the unknot
    for _ in range(k - 1):
        nxt = {p + 1: c for p, c in cur.items()}
        for p, c in prev.items():
            nxt[p] = nxt.get(p, 0) + c
        prev, cur = cur, {p: c for p, c in nxt.items() if c}
    return cur


def coeffs(p):
    return {e // 2: int(c) for (e,), c in p.terms.items()}


def test_euler_examples():
    assert euler_two_variable(BigradedModule({}, 2)).is_zero()
    one = BigradedModule.from_gradings([Grading.of(0, 0, 0)])
    assert euler_two_variable(one) == LaurentPoly.one(2)
    with pytest.raises(InvariantError):
        euler_two_variable(BigradedModule.from_gradings([Grading.of(0, 0, 0), Grading.of(0, 0, "1/2")]))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_torus_link_conway_matches_skein(n):
    m = catalog.lookup(f"T(2,{2 * n})").module
    assert coeffs(conway(m)) == skein_conway(2 * n)
    assert linking_from_conway(conway(m), STRICT_HOSTE) == n


def test_t28_collapse_matches_hfk_delta():
    m = catalog.lookup("T(2,8)").module
    delta = alexander_single(m)
    assert delta == delta.substitute_power(-1) or delta == -delta.substitute_power(-1)
    assert coeffs(conway(m)) == {7: 1, 5: 6, 3: 10, 1: 4}


def test_knot_alexander_is_euler_characteristic():
    e = catalog.lookup("T(2,3)")
    assert alexander_single(e.module) == parse_laurent("t - 1 + t^{-1}")


def test_linking_modes():
    p = parse_laurent("u^13+10u^11+35u^9+50u^7+25u^5", "u")
    assert linking_from_conway(p, LOWEST_TERM) == 25
    assert linking_from_conway(p, STRICT_HOSTE) == 0
    q = parse_laurent("-u^11-8u^9-20u^7-16u^5-5u^3", "u")
    assert linking_from_conway(q) == -5
    three = parse_laurent("3u", "u")
    assert linking_from_conway(three, LOWEST_TERM) == linking_from_conway(three, STRICT_HOSTE) == 3
    assert linking_from_conway(LaurentPoly.zero()) == INDETERMINATE
    with pytest.raises(InvariantError):
        linking_from_conway(parse_laurent("u^2", "u"))


def _hull_oracle(points):
    """Vertices: points not in the convex hull of the others (checked by
    triangles and segments, fine for small sets)."""
    pts = sorted(set(points))
    out = []
    for p in pts:
        others = [q for q in pts if q != p]
        inside = False
        for a, b in itertools.combinations(others, 2):
            if _on_segment(a, b, p):
                inside = True
        for a, b, c in itertools.combinations(others, 3):
            if _in_triangle(a, b, c, p):
                inside = True
        if not inside:
            out.append(p)
    return sorted(out)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(a, b, p):
    return _cross(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) \
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _in_triangle(a, b, c, p):
    if _cross(a, b, c) == 0:
        return False
    s = [_cross(a, b, p), _cross(b, c, p), _cross(c, a, p)]
    return all(x >= 0 for x in s) or all(x <= 0 for x in s)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=9))
def test_convex_hull_matches_oracle(points):
    assert sorted(convex_hull(points)) == _hull_oracle(points)


def test_polytope_examples():
    m = catalog.lookup("T(2,8)").module
    poly = floer_polytope(m)
    assert set(poly.vertices) <= set(m.alexander_support())
    assert poly.negated().vertices and sorted(poly.negated().vertices) == sorted(poly.vertices)
    assert convex_hull([(1, 1)]) == [(1, 1)]
    assert len(convex_hull([(0, 0), (1, 1), (2, 2)])) == 2


def test_dual_thurston_slices():
    m = catalog.lookup("T(2,8)").module
    for axis in (1, 2):
        assert dual_thurston_axis_slice(m, axis).strictly_inside_unit()
    variant = module_of(Decomposition.parse(
        "B[-2][0,2] + B[-4][1,-1] + B[-6][-1,-1] + Y[-1]^1[3/2,3/2] + Y[0]^0[2,2]"))
    s = dual_thurston_axis_slice(variant, 2)
    assert not s.strictly_inside_unit()
    assert s.support_interval == (Fraction(-3), Fraction(3))
    point = BigradedModule.from_gradings([Grading.of(0, 0, 0)])
    assert dual_thurston_axis_slice(point, 1).support_interval == (0, 0)


def test_delta_spectrum():
    m = catalog.lookup("T(2,8)").module
    assert [str(d) for d in delta_spectrum(m).distinct()] == ["4"]
    assert is_thin(m)
    assert is_thin(BigradedModule({}, 2))
    two = BigradedModule.from_gradings([Grading.of(0, 0, 0), Grading.of(1, 0, 0)])
    assert not is_thin(two)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=5))
def test_conway_of_symmetric_two_component_polynomials_is_odd(cs):
    terms = {}
    for k, c in enumerate(cs):
        for e in {k, -k}:
            terms[(2 * e,)] = terms.get((2 * e,), 0) + c
    p = LaurentPoly(1, terms)
    if p.is_zero():
        return
    nabla = conway_from_alexander(laurent_mul(parse_laurent("t^{-1/2}-t^{1/2}"), p))
    assert nabla.is_odd()
