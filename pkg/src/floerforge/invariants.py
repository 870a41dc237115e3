"""Decategorified invariants and polytopes of link Floer modules.

Polynomials use :class:`LaurentPoly` (doubled exponents); polytope vertices
are doubled-integer pairs.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .complexes import BigradedModule
from .exactalg import HalfInt, LaurentPoly, rewrite_in_z

STRICT_HOSTE = "strict-hoste"
LOWEST_TERM = "paper-lowest"
INDETERMINATE = "indeterminate"


class InvariantError(ValueError):
    """Input does not satisfy the preconditions of an invariant."""


# ---------------------------------------------------------------------------
# Euler characteristics and polynomials
# ---------------------------------------------------------------------------

def _maslov_parity_base(m: BigradedModule) -> int:
    cosets = {g.maslov % 2 for g in m.ranks}
    if len(cosets) > 1:
        raise InvariantError("Maslov gradings are not in a single Z-coset")
    return cosets.pop() if cosets else 0


def euler_two_variable(m: BigradedModule) -> LaurentPoly:
    """Graded Euler characteristic sum (-1)^M rank t1^a1 t2^a2.

    For a half-integer Maslov coset the sign is taken relative to the coset
    representative, so the top generator of F_{1/2} counts as +1. Knot
    modules (one Alexander grading) give a one-variable polynomial.
    """
    if m.n not in (1, 2):
        raise InvariantError("Euler characteristic needs one or two Alexander gradings")
    base = _maslov_parity_base(m)
    terms: Dict[Tuple[int, ...], int] = {}
    for g, r in m.ranks.items():
        sign = -1 if ((g.maslov - base) // 2) % 2 else 1
        terms[g.alex] = terms.get(g.alex, 0) + sign * r
    return LaurentPoly(m.n, terms)


def evaluate_reversed(p: LaurentPoly) -> LaurentPoly:
    """Two-variable polynomial at (t, 1/t): the second component reversed."""
    if p.nvars != 2:
        raise InvariantError("needs a two-variable polynomial")
    out: Dict[Tuple[int], Fraction] = {}
    for (a, b), c in p.terms.items():
        out[(a - b,)] = out.get((a - b,), 0) + c
    return LaurentPoly(1, out)


def divide_exact(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Exact one-variable Laurent division p / q; raises if q does not divide p."""
    if p.nvars != 1 or q.nvars != 1:
        raise InvariantError("divide_exact works on one-variable polynomials")
    if q.is_zero():
        raise InvariantError("division by zero polynomial")
    qtop = q.degree()
    qlead = q.terms[(qtop,)]
    lowest = p.min_degree() - q.min_degree() if not p.is_zero() else 0
    rest = p
    out: Dict[Tuple[int], Fraction] = {}
    while not rest.is_zero():
        shift = rest.degree() - qtop
        if shift < lowest:
            raise InvariantError(f"{q.render()} does not divide {p.render()}")
        c = rest.terms[(rest.degree(),)] / qlead
        out[(shift,)] = c
        rest = rest - LaurentPoly(1, {(shift,): c}) * q
    return LaurentPoly(1, out)


_HALF_DIFF = LaurentPoly(1, {(1,): 1, (-1,): -1})  # t^{1/2} - t^{-1/2}


def alexander_single(m: BigradedModule) -> LaurentPoly:
    """Single-variable Alexander polynomial.

    For a knot module this is the Euler characteristic. For two components
    it is chi(t, t) / (t^{1/2} - t^{-1/2}); with this normalisation the
    Conway polynomial of T(2,2n) has u-coefficient n.
    """
    chi = euler_two_variable(m)
    if m.n == 1:
        return chi
    collapsed = chi.collapse()
    if collapsed.is_zero():
        return collapsed
    return divide_exact(collapsed, _HALF_DIFF)


def conway_from_alexander(delta: LaurentPoly) -> LaurentPoly:
    """Delta(t) -> Delta(t^2) = nabla(t - 1/t) -> nabla(u)."""
    return rewrite_in_z(delta.substitute_power(2))


def conway(m: BigradedModule) -> LaurentPoly:
    if m.n != 2:
        raise InvariantError("conway expects a two-component module")
    return conway_from_alexander(alexander_single(m))


def linking_from_conway(p: LaurentPoly, mode: str = LOWEST_TERM) -> Union[int, str]:
    """Linking number read off a Conway polynomial of a two-component link.

    ``strict-hoste`` takes the coefficient of u; ``paper-lowest`` takes the
    lowest nonzero coefficient, which is what the worked contradictions use.
    """
    if mode not in (STRICT_HOSTE, LOWEST_TERM):
        raise InvariantError(f"unknown mode {mode!r}")
    if p.is_zero():
        return INDETERMINATE
    if not p.is_odd():
        raise InvariantError("Conway polynomial of a two-component link must be odd")
    if mode == STRICT_HOSTE:
        c = p.coeff(1)
    else:
        c = p.terms[(p.min_degree(),)]
    if c.denominator != 1:
        raise InvariantError("non-integral Conway coefficient")
    return int(c)


# ---------------------------------------------------------------------------
# Polytopes
# ---------------------------------------------------------------------------

Point = Tuple[int, int]


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Point]) -> List[Point]:
    """Monotone-chain hull, counterclockwise, no collinear vertices."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: List[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


@dataclass(frozen=True)
class FloerPolytope:
    """Convex hull of the (A1, A2) support; vertices doubled, counterclockwise."""

    vertices: Tuple[Point, ...]

    @property
    def half_vertices(self) -> List[Tuple[HalfInt, HalfInt]]:
        return [(HalfInt(a), HalfInt(b)) for a, b in self.vertices]

    def negated(self) -> "FloerPolytope":
        return FloerPolytope(tuple(convex_hull([(-a, -b) for a, b in self.vertices])))

    def render(self) -> str:
        return " ".join(f"({HalfInt(a)},{HalfInt(b)})" for a, b in self.vertices)

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}


def floer_polytope(m: BigradedModule) -> FloerPolytope:
    if m.n != 2:
        raise InvariantError("floer_polytope expects two Alexander gradings")
    if not m.ranks:
        raise InvariantError("empty module has no polytope")
    return FloerPolytope(tuple(convex_hull(m.alexander_support())))


@dataclass(frozen=True)
class DualThurstonSlice:
    """Support interval of the dual Thurston polytope along one axis."""

    axis: int
    support_interval: Tuple[Fraction, Fraction]

    def strictly_inside_unit(self) -> bool:
        lo, hi = self.support_interval
        return -1 < lo and hi < 1

    def render(self) -> str:
        lo, hi = self.support_interval
        return f"axis {self.axis}: [{lo}, {hi}]"


def thurston_norm(support: Sequence[Point], h: Tuple[int, int]) -> Fraction:
    """x(h) = 2 max <s, h> - |h1| - |h2| over the symmetric support s.

    Support points are doubled, so 2 max <s, h> is max of the doubled pairing.
    """
    top = max(s[0] * h[0] + s[1] * h[1] for s in support)
    return Fraction(top - abs(h[0]) - abs(h[1]))


def _critical_directions(hull: Sequence[Point]) -> List[Tuple[int, int]]:
    """Outward edge normals of the hull plus the coordinate rays; the norm is
    linear between consecutive entries."""
    dirs = {(1, 0), (-1, 0), (0, 1), (0, -1)}
    k = len(hull)
    for idx in range(k if k > 2 else k - 1):
        a, b = hull[idx], hull[(idx + 1) % k]
        ex, ey = b[0] - a[0], b[1] - a[1]
        for nx, ny in ((ey, -ex), (-ey, ex)):
            if nx or ny:
                dirs.add((nx, ny))
    return sorted(dirs)


def _dual_norm_on_axis(support: Sequence[Point], v: Tuple[int, int]) -> Optional[Fraction]:
    """x*(v) = sup <v, h> / x(h) over h with <v, h> > 0; None means infinite."""
    best = Fraction(0)
    for h in _critical_directions(convex_hull(support)):
        num = v[0] * h[0] + v[1] * h[1]
        if num <= 0:
            continue
        x = thurston_norm(support, h)
        if x <= 0:
            return None
        best = max(best, Fraction(num) / x)
    return best


def dual_thurston_axis_slice(m: BigradedModule, axis: int) -> DualThurstonSlice:
    """Interval of the dual Thurston polytope on coordinate axis 1 or 2.

    The Thurston norm is read from the link Floer support (polytope equals
    the dual Thurston polytope plus the unit hypercube, scaled by 2); the
    interval is [-1/x*(-e), 1/x*(e)].
    """
    if axis not in (1, 2):
        raise InvariantError("axis must be 1 or 2")
    if m.n != 2:
        raise InvariantError("dual Thurston slice expects two Alexander gradings")
    support = m.alexander_support()
    if not support:
        raise InvariantError("empty module")
    if set(support) != {(-a, -b) for a, b in support}:
        raise InvariantError("support is not symmetric under (a1, a2) -> (-a1, -a2)")
    e = (1, 0) if axis == 1 else (0, 1)
    ends = []
    for sign in (1, -1):
        d = _dual_norm_on_axis(support, (sign * e[0], sign * e[1]))
        # infinite dual norm: the slice collapses to 0 on that side
        ends.append(Fraction(0) if d is None else 1 / d)
    hi, lo = ends
    return DualThurstonSlice(axis, (-lo, hi))


# ---------------------------------------------------------------------------
# delta gradings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaSpectrum:
    """Multiset of doubled delta gradings sum(a) - M."""

    values: Tuple[Tuple[int, int], ...]  # (doubled delta, multiplicity)

    def distinct(self) -> List[HalfInt]:
        return [HalfInt(d) for d, _ in self.values]

    def render(self) -> str:
        return ", ".join(f"{HalfInt(d)}^{c}" if c > 1 else str(HalfInt(d)) for d, c in self.values)


def delta_spectrum(m: BigradedModule) -> DeltaSpectrum:
    counts: Counter = Counter()
    for g, r in m.ranks.items():
        counts[sum(g.alex) - g.maslov] += r
    return DeltaSpectrum(tuple(sorted(counts.items())))


def is_thin(m: BigradedModule) -> bool:
    return len(delta_spectrum(m).values) <= 1
