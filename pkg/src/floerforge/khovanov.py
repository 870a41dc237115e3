"""Integer Khovanov tables and the rank arithmetic around them.

Tables are data (JSON assets), never computed from diagrams. Gradings are
the usual homological ``i`` and quantum ``j``.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from .constraints import FAIL, PASS, ConstraintReport

GradedRanks = Dict[int, int]  # i - j grading -> rank


class KhovanovError(ValueError):
    pass


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


@dataclass
class KhTable:
    """(i, j) -> (free rank, torsion orders)."""

    entries: Dict[Tuple[int, int], Tuple[int, Tuple[int, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), (free, tors) in self.entries.items():
            tors = tuple(sorted(tors))
            for q in tors:
                if not _is_prime_power(q):
                    raise KhovanovError(f"torsion order {q} at ({i},{j}) is not a prime power")
            if free < 0:
                raise KhovanovError("negative free rank")
            if free or tors:
                clean[(i, j)] = (free, tors)
        parities = {j % 2 for _, j in clean}
        if len(parities) > 1:
            raise KhovanovError("quantum gradings of mixed parity")
        self.entries = dict(sorted(clean.items()))

    @classmethod
    def from_json(cls, data: Mapping) -> "KhTable":
        try:
            return cls({(int(e["i"]), int(e["j"])): (int(e.get("free", 0)), tuple(int(q) for q in e.get("torsion", ())))
                        for e in data["entries"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise KhovanovError(f"malformed Khovanov table: {exc}") from exc

    def to_json(self) -> dict:
        return {"entries": [{"i": i, "j": j, "free": f, "torsion": list(t)}
                            for (i, j), (f, t) in self.entries.items()]}

    def j_parity(self) -> Optional[int]:
        return next((j % 2 for _, j in self.entries), None)

    def torsion_count(self) -> int:
        return sum(len(t) for _, t in self.entries.values())


def unknot_table() -> KhTable:
    return KhTable({(0, 1): (1, ()), (0, -1): (1, ())})


def uct_ranks(t: KhTable, field_name: str = "q") -> Dict[Tuple[int, int], int]:
    """Field ranks by the universal coefficient theorem.

    Over Q only the free part counts. Over GF(2) every torsion summand of
    even order at (i, j) contributes once at (i, j) and once at (i - 1, j)
    (the Tor term).
    """
    out: Dict[Tuple[int, int], int] = defaultdict(int)
    for (i, j), (free, tors) in t.entries.items():
        out[(i, j)] += free
        if field_name == "gf2":
            for q in tors:
                if q % 2 == 0:
                    out[(i, j)] += 1
                    out[(i - 1, j)] += 1
        elif field_name != "q":
            raise KhovanovError(f"unknown field {field_name!r}")
    return {k: v for k, v in sorted(out.items()) if v}


def total_rank(t: KhTable, field_name: str = "q") -> int:
    return sum(uct_ranks(t, field_name).values())


def reduced_rank_f2(t: KhTable) -> int:
    """Reduced GF(2) rank: half the unreduced rank."""
    total = total_rank(t, "gf2")
    if total % 2:
        raise KhovanovError(f"odd GF(2) rank {total}")
    return total // 2


def i_minus_j(ranks: Mapping[Tuple[int, int], int]) -> GradedRanks:
    out: GradedRanks = defaultdict(int)
    for (i, j), r in ranks.items():
        out[i - j] += r
    return dict(sorted(out.items()))


def kh_tensor(a: Mapping[int, int], b: Mapping[int, int]) -> GradedRanks:
    out: GradedRanks = defaultdict(int)
    for x, ra in a.items():
        for y, rb in b.items():
            out[x + y] += ra * rb
    return {k: v for k, v in sorted(out.items()) if v}


def format_graded(g: Mapping[int, int], ring: str = "Q") -> str:
    parts = []
    for k, r in sorted(g.items()):
        if r:
            parts.append(f"{ring}_{k}" if r == 1 else f"{ring}^{r}_{k}")
    return " + ".join(parts) or "0"


def batson_seed_check(link: Mapping[int, int], split: Mapping[int, int], lk: int) -> ConstraintReport:
    """rank^{i-j=l}(link) >= rank^{i-j=l+2lk}(split tensor) for every l."""
    bad = []
    for t_grading, need in sorted(split.items()):
        l = t_grading - 2 * lk
        have = link.get(l, 0)
        if have < need:
            bad.append({"l": l, "link_rank": have, "tensor_grading": t_grading, "tensor_rank": need})
    if bad:
        w = bad[0]
        return ConstraintReport("batson-seed", FAIL,
                                f"rank at i-j={w['l']} is {w['link_rank']} but the split tensor has rank "
                                f"{w['tensor_rank']} at i-j={w['tensor_grading']}", {"violations": bad})
    return ConstraintReport("batson-seed", PASS, data={"violations": []})


@dataclass(frozen=True)
class LeeData:
    n_components: int
    gradings: Tuple[int, ...]  # homological gradings of the rank-2 Lee pieces

    @property
    def linking(self) -> Optional[int]:
        if self.n_components != 2 or len(self.gradings) != 2:
            return None
        return (max(self.gradings) - min(self.gradings)) // 2


def lee_data(t: KhTable) -> LeeData:
    """Homological gradings carrying rational rank >= 2 (the only places Lee
    classes can survive) and the component bound they give."""
    per_i: Dict[int, int] = Counter()
    for (i, _), r in uct_ranks(t, "q").items():
        per_i[i] += r
    big = tuple(sorted(i for i, r in per_i.items() if r >= 2))
    n = len(big)
    if t.j_parity() == 1 and n % 2 == 0:
        n = max(1, n - 1)  # odd quantum gradings: odd number of components
    return LeeData(n, big)


def lee_constraint(t: KhTable, n: int, lk: Optional[int] = None) -> ConstraintReport:
    """Component count and linking number from the surviving Lee gradings."""
    if n > 2:
        return ConstraintReport("lee", FAIL, f"only one and two components are handled, got {n}")
    data = lee_data(t)
    info = {"gradings": list(data.gradings), "components_at_most": data.n_components, "lk": data.linking}
    parity_ok = t.j_parity() == n % 2
    if not parity_ok:
        return ConstraintReport("lee", FAIL, f"quantum grading parity {t.j_parity()} does not match {n} components", info)
    if n == 1:
        if 0 not in data.gradings:
            return ConstraintReport("lee", FAIL, "no rank 2 in homological grading 0", info)
        return ConstraintReport("lee", PASS, data=info)
    if n > max(data.n_components, 1) or 0 not in data.gradings:
        return ConstraintReport("lee", FAIL, f"gradings {list(data.gradings)} cannot carry {n} Lee pairs", info)
    if lk is not None and data.gradings != tuple(sorted({0, 2 * lk})):
        return ConstraintReport("lee", FAIL, f"Lee gradings {list(data.gradings)} versus {{0, {2 * lk}}}", info)
    return ConstraintReport("lee", PASS, data=info)


def dowlin_bound(reduced_rank: int, n: int) -> int:
    """Upper bound 2^{n-1} rank(reduced Kh) on rank HFK."""
    return 2 ** (n - 1) * reduced_rank


@dataclass(frozen=True)
class ThinData:
    thin: bool
    s: Optional[int]
    chi_bound: Optional[int]
    deltas: Tuple[int, ...]


def kh_thin_s_chi(t: KhTable) -> ThinData:
    """Thinness over Q (two adjacent j - 2i values) and, when thin, the s-invariant
    read from the Lee generators in homological grading 0 (s = min j + 1) with
    the bound chi <= 1 - s."""
    q = uct_ranks(t, "q")
    deltas = tuple(sorted({j - 2 * i for i, j in q}))
    thin = len(deltas) == 1 or (len(deltas) == 2 and deltas[1] - deltas[0] == 2)
    if not thin:
        return ThinData(False, None, None, deltas)
    zero = sorted(j for (i, j) in q if i == 0)
    if not zero:
        return ThinData(True, None, None, deltas)
    s = zero[0] + 1
    return ThinData(True, s, 1 - s, deltas)


# Kh by i - j for the small knots used in the splitting arguments
KNOT_I_MINUS_J: Dict[str, GradedRanks] = {
    "unknot": {-1: 1, 1: 1},
    "T(2,3)": {-6: 1, -3: 2, -1: 1},
    "T(2,-3)": {1: 1, 3: 2, 6: 1},
    "figure-eight": {-3: 1, -1: 1, 0: 2, 1: 1, 3: 1},
}
