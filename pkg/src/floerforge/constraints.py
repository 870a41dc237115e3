"""Structural rules on link Floer modules, each runnable on its own.

Every rule returns a :class:`ConstraintReport`. Hypotheses (fibered,
unknotted, linking numbers, Legendrian data) are inputs; when they are
missing the rule reports ``inapplicable`` instead of passing.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .complexes import (
    BigradedModule,
    ComponentData,
    Grading,
    HFKRanks,
    hfk_alexander_ranks,
    hfk_total,
    project_to_hfk,
    symmetry_image,
)
from .exactalg import HalfInt, LaurentPoly
from .invariants import (
    InvariantError,
    alexander_single,
    divide_exact,
    dual_thurston_axis_slice,
)

PASS = "pass"
FAIL = "fail"
INAPPLICABLE = "inapplicable"


@dataclass
class ConstraintReport:
    rule: str
    verdict: str
    witness: str = ""
    data: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in (PASS, FAIL, INAPPLICABLE):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == FAIL and not self.witness:
            raise ValueError("a failing report needs a witness")

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def to_json(self) -> dict:
        out = {"rule": self.rule, "verdict": self.verdict, "witness": self.witness}
        if self.data:
            out["data"] = {k: _jsonable(v) for k, v in self.data.items()}
        return out


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    return str(v)


@dataclass
class LegendrianData:
    """Thurston-Bennequin and rotation numbers per component plus linking."""

    tb: Tuple[int, ...]
    rot: Tuple[int, ...]
    components: Optional[ComponentData] = None

    def alexander_doubled(self) -> int:
        """Twice the collapsed LOSS Alexander grading, sum_i (tb_i + rot_i + lk_i)."""
        n = len(self.tb)
        cd = self.components or ComponentData(n)
        return sum(self.tb[i] + self.rot[i] + cd.total_lk(i) for i in range(n))


def _g(a: int) -> str:
    return str(HalfInt(a))


def _point(alex: Sequence[int]) -> str:
    return "(" + ",".join(_g(a) for a in alex) + ")"


# ---------------------------------------------------------------------------
# symmetry
# ---------------------------------------------------------------------------

def check_symmetry(m: BigradedModule, exchange: bool = False) -> ConstraintReport:
    """rank_M(a) == rank_{M - 2 sum a}(-a); optionally rank(a1,a2) == rank(a2,a1)."""
    for g, r in m.ranks.items():
        img = symmetry_image(g)
        if m.rank_at(img) != r:
            return ConstraintReport("symmetry", FAIL,
                                    f"rank {r} at {g} but {m.rank_at(img)} at {img}")
    if exchange:
        if m.n != 2:
            return ConstraintReport("symmetry", FAIL, "exchange symmetry needs two components")
        for g, r in m.ranks.items():
            swapped = Grading((g.alex[1], g.alex[0]), g.maslov)
            if m.rank_at(swapped) != r:
                return ConstraintReport("symmetry", FAIL,
                                        f"rank {r} at {g} but {m.rank_at(swapped)} at {swapped} (exchange)")
    return ConstraintReport("symmetry", PASS)


def check_hfk_symmetry(h: Mapping[Tuple[int, int], int]) -> ConstraintReport:
    """HFK symmetry rank(A, M) == rank(-A, M - 2A)."""
    for (a, mm), r in h.items():
        other = h.get((-a, mm - 2 * a), 0)
        if other != r:
            return ConstraintReport("hfk-symmetry", FAIL,
                                    f"rank {r} at A={_g(a)}, M={_g(mm)} but {other} at A={_g(-a)}, M={_g(mm - 2 * a)}")
    return ConstraintReport("hfk-symmetry", PASS)


# ---------------------------------------------------------------------------
# spectral sequence rules
# ---------------------------------------------------------------------------

def _line_ranks(m: BigradedModule, i: int) -> Dict[int, int]:
    out: Dict[int, int] = defaultdict(int)
    for g, r in m.ranks.items():
        out[g.alex[i]] += r
    return dict(out)


def check_component_degeneration(m: BigradedModule, cd: ComponentData, i: int,
                                 target: Mapping[Tuple[int, int], int]) -> ConstraintReport:
    """Forgetting the other components leaves HFK(L_i) (x) V^(n-1), with the
    A_i grading shifted by lk(L_i, L - L_i)/2.

    Checked as rank and parity inequalities on each A_i line.
    """
    rule = f"degeneration[{i + 1}]"
    if not 0 <= i < m.n:
        return ConstraintReport(rule, INAPPLICABLE, f"component {i + 1} out of range")
    shift = cd.total_lk(i)
    factor = 2 ** (m.n - 1)
    need: Dict[int, int] = defaultdict(int)
    for a, r in hfk_alexander_ranks(target).items():
        need[a + shift] += factor * r
    have = _line_ranks(m, i)
    if sum(have.values()) < sum(need.values()):
        return ConstraintReport(rule, FAIL,
                                f"total rank {sum(have.values())} < {sum(need.values())} needed by HFK(L_{i + 1}) (x) V",
                                {"shift": HalfInt(shift)})
    for a in sorted(set(have) | set(need)):
        h, n_ = have.get(a, 0), need.get(a, 0)
        if h < n_ or (h - n_) % 2:
            return ConstraintReport(rule, FAIL,
                                    f"A_{i + 1}={_g(a)}: rank {h} versus {n_} surviving (needs >= and same parity)",
                                    {"shift": HalfInt(shift)})
    return ConstraintReport(rule, PASS, data={"shift": HalfInt(shift)})


def check_global_degeneration(hfk: Mapping[Tuple[int, int], int], n: int) -> ConstraintReport:
    """HFK of an n-component link degenerates to HF of #^{n-1} S^1 x S^2."""
    total = hfk_total(hfk)
    if total < 2 ** (n - 1):
        return ConstraintReport("global-degeneration", FAIL, f"total rank {total} < 2^{n - 1}")
    bad = [mm for (_, mm), r in hfk.items() if r and (mm - (n - 1)) % 2]
    if bad:
        return ConstraintReport("global-degeneration", FAIL,
                                f"Maslov grading {_g(bad[0])} not in Z + {_g(n - 1)}")
    top = max(mm for (_, mm), r in hfk.items() if r)
    if top < n - 1:
        return ConstraintReport("global-degeneration", FAIL,
                                f"maximal Maslov grading {_g(top)} < {_g(n - 1)}")
    return ConstraintReport("global-degeneration", PASS)


def check_fibered_top(hfk: Mapping[Tuple[int, int], int], fibered: Optional[bool],
                      chi: Optional[int], n: int) -> ConstraintReport:
    """Fibered links have rank 1 in the top grading (n - chi)/2 and nothing above."""
    if not fibered or chi is None:
        return ConstraintReport("fibered-top", INAPPLICABLE, "no fibered hypothesis")
    top = n - chi  # doubled
    ranks = hfk_alexander_ranks(hfk)
    above = [a for a, r in ranks.items() if a > top and r]
    if above:
        return ConstraintReport("fibered-top", FAIL, f"support at A={_g(above[-1])} above top {_g(top)}")
    if ranks.get(top, 0) != 1:
        return ConstraintReport("fibered-top", FAIL, f"rank {ranks.get(top, 0)} at top grading A={_g(top)}")
    return ConstraintReport("fibered-top", PASS, data={"top": HalfInt(top)})


def check_braid_axis(m: BigradedModule, cd: Optional[ComponentData], i: int) -> ConstraintReport:
    """Rank 2^{n-1} at the maximal A_i grading flags L_i as a braid axis.

    The verdict is ``pass`` exactly when the braid-axis pattern is present;
    ``data['braid_axis']`` carries the flag. When all linking numbers of L_i
    are declared, L_i is never an axis if some other component has linking
    number 0 with it: each component of a closed braid winds at least once
    around the axis, so split patterns are excluded.
    """
    rule = f"braid-axis[{i + 1}]"
    lines = _line_ranks(m, i)
    if not lines:
        return ConstraintReport(rule, FAIL, "empty module", {"braid_axis": False})
    top = max(lines)
    r = lines[top]
    known = cd is not None and all((min(i, j), max(i, j)) in cd.lk for j in range(m.n) if j != i)
    unlinked = [j for j in range(m.n) if j != i and cd is not None and cd.linking(i, j) == 0]
    if known and unlinked:
        return ConstraintReport(rule, FAIL, f"L_{unlinked[0] + 1} has linking number 0 with L_{i + 1}",
                                {"braid_axis": False, "max": HalfInt(top)})
    flag = r == 2 ** (m.n - 1)
    if flag:
        return ConstraintReport(rule, PASS, data={"braid_axis": True, "max": HalfInt(top)})
    return ConstraintReport(rule, FAIL, f"rank {r} at maximal A_{i + 1}={_g(top)}",
                            {"braid_axis": False, "max": HalfInt(top)})


def check_loss_bound(hfk: Mapping[Tuple[int, int], int], ld: Optional[LegendrianData] = None,
                     n: int = 1, alexander: Optional[int] = None) -> ConstraintReport:
    """Nonvanishing LOSS class at A forces rank(A-1) + rank(A+1) >= n.

    ``alexander`` (doubled) overrides the grading computed from ``ld``.
    """
    if alexander is None:
        if ld is None:
            return ConstraintReport("loss-bound", INAPPLICABLE, "no Legendrian data")
        alexander = ld.alexander_doubled()
    ranks = hfk_alexander_ranks(hfk)
    got = ranks.get(alexander - 2, 0) + ranks.get(alexander + 2, 0)
    data = {"A": HalfInt(alexander), "adjacent": got}
    if got < n:
        return ConstraintReport("loss-bound", FAIL,
                                f"rank(A-1)+rank(A+1) = {got} < {n} at A={_g(alexander)}", data)
    return ConstraintReport("loss-bound", PASS, data=data)


def fibered_loss_grading(chi: int, n: int) -> int:
    """Doubled collapsed grading of the LOSS class of a fibered link, (n - chi)/2."""
    return n - chi


# ---------------------------------------------------------------------------
# parity rules
# ---------------------------------------------------------------------------

def hfk_delta(hfk: Mapping[Tuple[int, int], int], n: int) -> LaurentPoly:
    """chi(HFK) / (t^{1/2} - t^{-1/2})^{n-1}."""
    coset = (n - 1) % 2
    terms: Dict[Tuple[int], int] = defaultdict(int)
    for (a, mm), r in hfk.items():
        sign = -1 if ((mm - coset) // 2) % 2 else 1
        terms[(a,)] += sign * r
    p = LaurentPoly(1, terms)
    q = LaurentPoly(1, {(1,): 1, (-1,): -1})
    for _ in range(n - 1):
        if p.is_zero():
            break
        p = divide_exact(p, q)
    return p


def check_parity_rules(m, cd: Optional[ComponentData] = None, n: Optional[int] = None) -> List[ConstraintReport]:
    """The four parity rules, (a) to (d), for a module or an HFK rank table.

    (a) even rank in every A_i hyperplane (HFK input: even total rank);
    (b) odd rank 2m+1 at a multi-grading forces total rank >= 2^n + 2m;
    (c) Delta(1) = 0 for links;
    (d) unlink patterns: support in one Alexander grading, or rank 2^{n-1}.
    The unlink verdict is reported as ``data['unlink']``.
    """
    if isinstance(m, BigradedModule):
        n = m.n if n is None else n
        return [_parity_a_module(m), _parity_b_module(m, n),
                _parity_c(m, None, n), _parity_d(m.alexander_support(), m.total(), n)]
    hfk = dict(m)
    if n is None:
        n = cd.n_components if cd else 1
    return [_parity_a_hfk(hfk, n), _parity_b_hfk(hfk, n),
            _parity_c(None, hfk, n), _parity_d(sorted({(a,) for (a, _), r in hfk.items() if r}),
                                               hfk_total(hfk), n)]


def _parity_a_module(m: BigradedModule) -> ConstraintReport:
    if m.n < 2:
        return ConstraintReport("parity-a", INAPPLICABLE, "knot module")
    for i in range(m.n):
        for a, r in sorted(_line_ranks(m, i).items()):
            if r % 2:
                return ConstraintReport("parity-a", FAIL, f"rank {r} in hyperplane A_{i + 1}={_g(a)}",
                                        {"component": i + 1, "hyperplane": HalfInt(a)})
    return ConstraintReport("parity-a", PASS)


def _parity_a_hfk(hfk: HFKRanks, n: int) -> ConstraintReport:
    if n < 2:
        return ConstraintReport("parity-a", INAPPLICABLE, "knot")
    total = hfk_total(hfk)
    if total % 2:
        return ConstraintReport("parity-a", FAIL, f"odd total rank {total} for a {n}-component link")
    return ConstraintReport("parity-a", PASS)


def _parity_b_module(m: BigradedModule, n: int) -> ConstraintReport:
    if n < 2:
        return ConstraintReport("parity-b", INAPPLICABLE, "knot module")
    total = m.total()
    for alex, r in sorted(m.alexander_ranks().items()):
        if r % 2 and total < 2 ** n + (r - 1):
            return ConstraintReport("parity-b", FAIL,
                                    f"odd rank {r} at {_point(alex)} needs total >= {2 ** n + r - 1}, have {total}")
    return ConstraintReport("parity-b", PASS)


def _parity_b_hfk(hfk: HFKRanks, n: int) -> ConstraintReport:
    if n < 2:
        return ConstraintReport("parity-b", INAPPLICABLE, "knot")
    total = hfk_total(hfk)
    for a, r in hfk_alexander_ranks(hfk).items():
        if r % 2 and total < 2 ** n:
            return ConstraintReport("parity-b", FAIL,
                                    f"odd rank {r} at A={_g(a)} needs total >= {2 ** n}, have {total}")
    return ConstraintReport("parity-b", PASS)


def _parity_c(m: Optional[BigradedModule], hfk: Optional[HFKRanks], n: int) -> ConstraintReport:
    if n < 2:
        return ConstraintReport("parity-c", INAPPLICABLE, "knot")
    try:
        if m is not None:
            if m.n != 2:
                return ConstraintReport("parity-c", INAPPLICABLE, "needs two Alexander gradings")
            delta = alexander_single(m)
        else:
            delta = hfk_delta(hfk, n)
    except InvariantError as exc:
        return ConstraintReport("parity-c", FAIL, f"Euler characteristic not divisible: {exc}")
    value = delta.evaluate_at_one()
    if value != 0:
        return ConstraintReport("parity-c", FAIL, f"Delta(1) = {value} != 0 (Delta = {delta.render()})")
    return ConstraintReport("parity-c", PASS)


def _parity_d(support: Sequence[Tuple[int, ...]], total: int, n: int) -> ConstraintReport:
    collapsed = {sum(a) for a in support}
    reasons = []
    if len(collapsed) == 1:
        reasons.append("single Alexander grading")
    if n >= 1 and total == 2 ** (n - 1):
        reasons.append(f"rank {total} = 2^{n - 1}")
    data = {"unlink": bool(reasons)}
    if reasons:
        return ConstraintReport("parity-d", PASS, "unlink: " + ", ".join(reasons), data)
    return ConstraintReport("parity-d", PASS, data=data)


# ---------------------------------------------------------------------------
# polytope rule
# ---------------------------------------------------------------------------

def check_braid_polytope(m: BigradedModule, cd: ComponentData,
                         axes: Optional[Sequence[int]] = None) -> ConstraintReport:
    """An unknotted braid axis L_i with |lk| > 1 puts the dual Thurston slice on
    the other coordinate axis strictly inside (-1, 1).

    ``axes`` lists components (0-based) declared to be unknotted braid axes;
    by default every component declared unknotted whose A_i pattern is the
    braid-axis pattern is used.
    """
    if m.n != 2:
        return ConstraintReport("braid-polytope", INAPPLICABLE, "needs a two-component link")
    lk = cd.linking(0, 1)
    if abs(lk) <= 1:
        return ConstraintReport("braid-polytope", INAPPLICABLE, f"|lk| = {abs(lk)} <= 1 (Hopf case)")
    if axes is None:
        axes = [i for i in range(2)
                if (cd.unknotted[i] if i < len(cd.unknotted) else False)
                and check_braid_axis(m, cd, i).data["braid_axis"]]
    if not axes:
        return ConstraintReport("braid-polytope", INAPPLICABLE, "no unknotted braid axis")
    slices = {}
    for i in axes:
        other = 2 if i == 0 else 1
        try:
            s = dual_thurston_axis_slice(m, other)
        except InvariantError as exc:
            return ConstraintReport("braid-polytope", FAIL, f"slice undefined: {exc}")
        slices[i + 1] = s.render()
        if not s.strictly_inside_unit():
            return ConstraintReport("braid-polytope", FAIL,
                                    f"L_{i + 1} braid axis but dual Thurston slice {s.render()} not inside (-1,1)",
                                    {"slices": slices})
    return ConstraintReport("braid-polytope", PASS, data={"slices": slices})


# ---------------------------------------------------------------------------
# skein exact triangle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TriangleBound:
    low: int
    high: int

    def values(self) -> List[int]:
        return list(range(self.low, self.high + 1, 2))

    @property
    def forced(self) -> bool:
        return self.low == self.high


def exact_triangle_bounds(a: Mapping[Tuple[int, int], int],
                          b: Mapping[Tuple[int, int], int],
                          maslov_aware: bool = True) -> Dict[int, TriangleBound]:
    """Possible ranks of the third term of an exact triangle, per Alexander grading.

    Inputs are ``{(A, M): rank}`` (doubled), already shifted so that the map
    between them preserves gradings. With ``maslov_aware`` only generators in
    the same Maslov grading can cancel, which tightens the lower bound.
    """
    keys = sorted({k for k, r in a.items() if r} | {k for k, r in b.items() if r})
    by_a: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    for k in keys:
        by_a[k[0]].append((a.get(k, 0), b.get(k, 0)))
    out: Dict[int, TriangleBound] = {}
    for alex, pairs in sorted(by_a.items()):
        ra = sum(x for x, _ in pairs)
        rb = sum(y for _, y in pairs)
        if maslov_aware:
            low = sum(abs(x - y) for x, y in pairs)
        else:
            low = abs(ra - rb)
        out[alex] = TriangleBound(low, ra + rb)
    return out


# ---------------------------------------------------------------------------
# gauntlet
# ---------------------------------------------------------------------------

RULE_ORDER = ("parity", "symmetry", "degeneration", "fibered-top", "braid-polytope")


def gauntlet(m: BigradedModule, cd: Optional[ComponentData] = None,
             rules: Sequence[str] = RULE_ORDER,
             targets: Optional[Mapping[int, Mapping[Tuple[int, int], int]]] = None,
             hfk: Optional[Mapping[Tuple[int, int], int]] = None) -> List[ConstraintReport]:
    """Run the named rules in the fixed order (cheap parity rules first)."""
    unknown = set(rules) - set(RULE_ORDER)
    if unknown:
        raise ValueError(f"unknown rules {sorted(unknown)}")
    cd = cd or ComponentData(m.n)
    out: List[ConstraintReport] = []
    for rule in RULE_ORDER:
        if rule not in rules:
            continue
        if rule == "parity":
            out.extend(check_parity_rules(m, cd))
        elif rule == "symmetry":
            out.append(check_symmetry(m))
        elif rule == "degeneration":
            for i, target in sorted((targets or {}).items()):
                out.append(check_component_degeneration(m, cd, i, target))
        elif rule == "fibered-top":
            h = hfk if hfk is not None else project_to_hfk(m)
            out.append(check_fibered_top(h, cd.fibered, cd.chi, m.n))
        elif rule == "braid-polytope":
            out.append(check_braid_polytope(m, cd))
    return out
