"""Bifiltered chain complexes over GF(2) or Q.

Gradings are stored doubled: a generator at Alexander gradings (1/2, -3/2)
and Maslov grading -1 has ``alex == (1, -3)`` and ``maslov == -2``. Most of
the library works with two Alexander gradings, but knots (one grading) and
split links with three or more components are supported by the module-level
operations.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exactalg import (
    GF2,
    ExactAlgError,
    Field,
    HalfInt,
    SparseMatrix,
    field_from_name,
    format_scalar,
    rank,
)


class ComplexError(ValueError):
    """Malformed complex or module input."""


# ---------------------------------------------------------------------------
# Gradings and modules
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Grading:
    """Multi-Alexander grading plus Maslov grading, all doubled."""

    alex: Tuple[int, ...]
    maslov: int

    @classmethod
    def of(cls, *values) -> "Grading":
        """``Grading.of(a1, a2, m)`` from ordinary values (ints, Fractions, "1/2")."""
        *alex, m = [HalfInt.of(v).doubled for v in values]
        return cls(tuple(alex), m)

    @property
    def a1(self) -> HalfInt:
        return HalfInt(self.alex[0])

    @property
    def a2(self) -> HalfInt:
        return HalfInt(self.alex[1])

    @property
    def m(self) -> HalfInt:
        return HalfInt(self.maslov)

    @property
    def n(self) -> int:
        return len(self.alex)

    def shifted(self, alex: Sequence[int] = None, maslov: int = 0) -> "Grading":
        alex = alex or (0,) * self.n
        return Grading(tuple(a + b for a, b in zip(self.alex, alex)), self.maslov + maslov)

    def doubled(self) -> List[int]:
        return list(self.alex) + [self.maslov]

    def __str__(self):
        parts = [str(HalfInt(a)) for a in self.alex]
        return f"({', '.join(parts)}; {HalfInt(self.maslov)})"


def symmetry_image(g: Grading) -> Grading:
    """The conjugation symmetry (a, M) -> (-a, M - 2 sum(a)); an involution."""
    return Grading(tuple(-a for a in g.alex), g.maslov - 2 * sum(g.alex))


def mirror_grading(g: Grading) -> Grading:
    """Grading of the dual generator in the mirror, (a, M) -> (-a, -M - (n-1))."""
    return Grading(tuple(-a for a in g.alex), -g.maslov - 2 * (g.n - 1))


class BigradedModule:
    """Finitely supported rank function on gradings."""

    def __init__(self, ranks: Mapping[Grading, int] = (), n: Optional[int] = None):
        clean: Dict[Grading, int] = {}
        items = ranks.items() if isinstance(ranks, Mapping) else ranks
        for g, r in items:
            if r < 0:
                raise ComplexError(f"negative rank at {g}")
            if r:
                clean[g] = clean.get(g, 0) + r
        ns = {g.n for g in clean}
        if len(ns) > 1:
            raise ComplexError("gradings with different numbers of Alexander components")
        if n is None:
            n = ns.pop() if ns else 2
        elif ns and ns != {n}:
            raise ComplexError("grading length does not match n")
        self.n = n
        self.ranks = dict(sorted(clean.items()))

    @classmethod
    def from_gradings(cls, gradings: Iterable[Grading], n: Optional[int] = None) -> "BigradedModule":
        counts: Dict[Grading, int] = defaultdict(int)
        for g in gradings:
            counts[g] += 1
        return cls(counts, n)

    def total(self) -> int:
        return sum(self.ranks.values())

    def support(self) -> List[Grading]:
        return list(self.ranks)

    def alexander_support(self) -> List[Tuple[int, ...]]:
        return sorted({g.alex for g in self.ranks})

    def rank_at(self, g: Grading) -> int:
        return self.ranks.get(g, 0)

    def alexander_ranks(self) -> Dict[Tuple[int, ...], int]:
        out: Dict[Tuple[int, ...], int] = defaultdict(int)
        for g, r in self.ranks.items():
            out[g.alex] += r
        return dict(out)

    def __add__(self, other: "BigradedModule") -> "BigradedModule":
        merged = dict(self.ranks)
        for g, r in other.ranks.items():
            merged[g] = merged.get(g, 0) + r
        return BigradedModule(merged, self.n)

    def map_gradings(self, fn) -> "BigradedModule":
        out: Dict[Grading, int] = defaultdict(int)
        for g, r in self.ranks.items():
            out[fn(g)] += r
        return BigradedModule(out, self.n)

    def mirror(self) -> "BigradedModule":
        return self.map_gradings(mirror_grading)

    def tensor_v(self) -> "BigradedModule":
        """Tensor with V = F_0 + F_{-1}, adding a component at Alexander grading 0."""
        out: Dict[Grading, int] = defaultdict(int)
        for g, r in self.ranks.items():
            out[Grading(g.alex + (0,), g.maslov)] += r
            out[Grading(g.alex + (0,), g.maslov - 2)] += r
        return BigradedModule(out, self.n + 1)

    def __eq__(self, other):
        return isinstance(other, BigradedModule) and self.n == other.n and self.ranks == other.ranks

    def __hash__(self):
        return hash((self.n, tuple(self.ranks.items())))

    def __repr__(self):
        body = ", ".join(f"{g}:{r}" for g, r in self.ranks.items())
        return f"BigradedModule({body})"

    def to_json(self) -> dict:
        return {"n": self.n, "ranks": [{"gr": g.doubled(), "rank": r} for g, r in self.ranks.items()]}

    @classmethod
    def from_json(cls, data: dict) -> "BigradedModule":
        ranks = {}
        for item in data["ranks"]:
            gr = [int(x) for x in item["gr"]]
            g = Grading(tuple(gr[:-1]), gr[-1])
            ranks[g] = ranks.get(g, 0) + int(item["rank"])
        return cls(ranks, data.get("n"))


# HFK-style ranks: {(A doubled, M doubled): rank}
HFKRanks = Dict[Tuple[int, int], int]


def hfk_total(h: Mapping[Tuple[int, int], int]) -> int:
    return sum(h.values())


def hfk_alexander_ranks(h: Mapping[Tuple[int, int], int]) -> Dict[int, int]:
    out: Dict[int, int] = defaultdict(int)
    for (a, _), r in h.items():
        out[a] += r
    return dict(sorted(out.items()))


def format_hfk(h: Mapping[Tuple[int, int], int]) -> str:
    """Render as ``F_{m}^r[A] + ...`` with Alexander gradings descending."""
    by_a: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    for (a, m), r in h.items():
        if r:
            by_a[a].append((m, r))
    parts = []
    for a in sorted(by_a, reverse=True):
        terms = []
        for m, r in sorted(by_a[a], reverse=True):
            power = f"^{r}" if r > 1 else ""
            terms.append(f"F_{{{HalfInt(m)}}}{power}")
        parts.append(f"({' + '.join(terms)})[{HalfInt(a)}]")
    return " + ".join(parts) if parts else "0"


@dataclass
class ComponentData:
    """Hypotheses about the components of a link, declared rather than inferred."""

    n_components: int
    lk: Dict[Tuple[int, int], int] = dc_field(default_factory=dict)
    fibered: Optional[bool] = None
    unknotted: Tuple[Optional[bool], ...] = ()
    genus_bound: Tuple[Optional[int], ...] = ()
    chi: Optional[int] = None

    def linking(self, i: int, j: int) -> int:
        if i == j:
            return 0
        key = (min(i, j), max(i, j))
        return self.lk.get(key, 0)

    def total_lk(self, i: int) -> int:
        return sum(self.linking(i, j) for j in range(self.n_components) if j != i)

    @classmethod
    def two_component(cls, lk: int, **kwargs) -> "ComponentData":
        return cls(2, {(0, 1): lk}, **kwargs)


# ---------------------------------------------------------------------------
# Complexes
# ---------------------------------------------------------------------------

class BifilteredComplex:
    """Generators with gradings and a filtered differential.

    ``diff`` maps ``(source, target)`` to a nonzero field scalar. Generator
    order is the insertion order of ``generators``.
    """

    def __init__(self, field: Field, generators: Mapping[str, Grading] = (),
                 diff: Mapping[Tuple[str, str], object] = ()):
        self.field = field
        gens = generators.items() if isinstance(generators, Mapping) else generators
        self.generators: Dict[str, Grading] = dict(gens)
        ns = {g.n for g in self.generators.values()}
        if len(ns) > 1:
            raise ComplexError("generators with different numbers of Alexander gradings")
        self.n = ns.pop() if ns else 2
        clean: Dict[Tuple[str, str], object] = {}
        items = diff.items() if isinstance(diff, Mapping) else diff
        for (s, t), c in items:
            c = field.coerce(c)
            if c:
                total = field.add(clean.get((s, t), 0), c)
                if total:
                    clean[(s, t)] = total
                else:
                    clean.pop((s, t), None)
        self.diff = clean

    def __len__(self):
        return len(self.generators)

    def grading(self, gid: str) -> Grading:
        return self.generators[gid]

    def out_arrows(self) -> Dict[str, Dict[str, object]]:
        out: Dict[str, Dict[str, object]] = {g: {} for g in self.generators}
        for (s, t), c in self.diff.items():
            out.setdefault(s, {})[t] = c
        return out

    def in_arrows(self) -> Dict[str, Dict[str, object]]:
        inn: Dict[str, Dict[str, object]] = {g: {} for g in self.generators}
        for (s, t), c in self.diff.items():
            inn.setdefault(t, {})[s] = c
        return inn

    def drop(self, s: str, t: str) -> Tuple[int, ...]:
        """Doubled Alexander drop of an arrow s -> t."""
        gs, gt = self.generators[s], self.generators[t]
        return tuple(a - b for a, b in zip(gs.alex, gt.alex))

    def module(self) -> BigradedModule:
        """Generator counts per grading (the chain groups, not homology)."""
        return BigradedModule.from_gradings(self.generators.values(), self.n)

    def blocks(self) -> Dict[Grading, List[str]]:
        out: Dict[Grading, List[str]] = defaultdict(list)
        for gid, g in self.generators.items():
            out[g].append(gid)
        return dict(out)

    def direct_sum(self, other: "BifilteredComplex", prefix: Tuple[str, str] = ("", "")) -> "BifilteredComplex":
        if self.field is not other.field:
            raise ComplexError("direct sum of complexes over different fields")
        pa, pb = prefix
        gens = {pa + k: v for k, v in self.generators.items()}
        for k, v in other.generators.items():
            if pb + k in gens:
                raise ComplexError(f"duplicate generator id {pb + k}")
            gens[pb + k] = v
        diff = {(pa + s, pa + t): c for (s, t), c in self.diff.items()}
        diff.update({(pb + s, pb + t): c for (s, t), c in other.diff.items()})
        return BifilteredComplex(self.field, gens, diff)

    def renamed(self, mapping: Mapping[str, str]) -> "BifilteredComplex":
        gens = {mapping[k]: v for k, v in self.generators.items()}
        diff = {(mapping[s], mapping[t]): c for (s, t), c in self.diff.items()}
        return BifilteredComplex(self.field, gens, diff)

    def with_field(self, field: Field) -> "BifilteredComplex":
        return BifilteredComplex(field, self.generators, self.diff)

    def dual(self) -> "BifilteredComplex":
        """The mirror complex: arrows reversed, gradings via ``mirror_grading``."""
        gens = {k: mirror_grading(v) for k, v in self.generators.items()}
        diff = {(t, s): c for (s, t), c in self.diff.items()}
        return BifilteredComplex(self.field, gens, diff)

    def tensor(self, other: "BifilteredComplex", merge: Optional[Sequence[int]] = None) -> "BifilteredComplex":
        """Tensor product. With ``merge=None`` the Alexander gradings are
        concatenated (split union of gradings); otherwise ``merge[k]`` names the
        component of ``self`` that absorbs component ``k`` of ``other``
        (connected sum along that component)."""
        f = self.field
        gens = {}
        for a, ga in self.generators.items():
            for b, gb in other.generators.items():
                gens[f"{a}.{b}"] = _combine(ga, gb, merge)
        diff: Dict[Tuple[str, str], object] = {}
        for (s, t), c in self.diff.items():
            for b in other.generators:
                diff[(f"{s}.{b}", f"{t}.{b}")] = c
        for (s, t), c in other.diff.items():
            for a, ga in self.generators.items():
                sign = -1 if (ga.maslov // 2) % 2 else 1
                diff[(f"{a}.{s}", f"{a}.{t}")] = f.mul(f.coerce(sign), c)
        return BifilteredComplex(f, gens, diff)

    def tensor_v(self) -> "BifilteredComplex":
        v = BifilteredComplex(self.field, {"v0": Grading((0,), 0), "v1": Grading((0,), -2)})
        return self.tensor(v)

    # serialization
    def to_json(self) -> dict:
        gens = [{"id": k, "gr": self.generators[k].doubled()} for k in sorted(self.generators)]
        diff = [{"from": s, "to": t, "c": format_scalar(c)} for (s, t), c in sorted(self.diff.items())]
        return {"field": self.field.name, "generators": gens, "diff": diff}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "BifilteredComplex":
        if not isinstance(data, dict) or "generators" not in data:
            raise ComplexError("complex JSON needs a 'generators' list")
        try:
            field = field_from_name(data.get("field", "GF2"))
            gens = {}
            for item in data["generators"]:
                gid = str(item["id"])
                if gid in gens:
                    raise ComplexError(f"duplicate generator id {gid}")
                gr = [int(x) for x in item["gr"]]
                if len(gr) < 2:
                    raise ComplexError(f"grading of {gid} too short")
                gens[gid] = Grading(tuple(gr[:-1]), gr[-1])
            diff = {}
            for item in data.get("diff", []):
                s, t = str(item["from"]), str(item["to"])
                if s not in gens or t not in gens:
                    raise ComplexError(f"arrow {s}->{t} names an unknown generator")
                diff[(s, t)] = field.add(diff.get((s, t), 0), field.coerce(Fraction(str(item.get("c", "1")))))
        except (KeyError, TypeError, ExactAlgError) as exc:
            raise ComplexError(f"bad complex JSON: {exc}") from exc
        return cls(field, gens, diff)

    @classmethod
    def loads(cls, text: str) -> "BifilteredComplex":
        return cls.from_json(json.loads(text))

    def __eq__(self, other):
        return (isinstance(other, BifilteredComplex) and self.field is other.field
                and self.generators == other.generators and self.diff == other.diff)

    def __repr__(self):
        return f"BifilteredComplex({self.field.name}, {len(self.generators)} generators, {len(self.diff)} arrows)"


def _combine(ga: Grading, gb: Grading, merge) -> Grading:
    if merge is None:
        return Grading(ga.alex + gb.alex, ga.maslov + gb.maslov)
    alex = list(ga.alex)
    for k, target in enumerate(merge):
        alex[target] += gb.alex[k]
    return Grading(tuple(alex), ga.maslov + gb.maslov)


# ---------------------------------------------------------------------------
# Validation and homology
# ---------------------------------------------------------------------------

def validate_complex(c: BifilteredComplex) -> List[str]:
    """Return a list of violations; an empty list means the complex is valid."""
    problems: List[str] = []
    gens = c.generators
    for (s, t) in c.diff:
        if s not in gens or t not in gens:
            problems.append(f"unknown generator in arrow {s}->{t}")
            continue
        gs, gt = gens[s], gens[t]
        if gs.maslov - gt.maslov != 2:
            problems.append(f"maslov drop {s}->{t}: {HalfInt(gs.maslov - gt.maslov)}")
        if any(d < 0 for d in c.drop(s, t)):
            problems.append(f"filtration {s}->{t}: alexander grading increases")
    if gens:
        first = next(iter(gens.values()))
        for gid, g in gens.items():
            if g.maslov % 2 != first.maslov % 2:
                problems.append(f"coset {gid}: maslov {HalfInt(g.maslov)}")
            for k, (a, b) in enumerate(zip(g.alex, first.alex)):
                if (a - b) % 2:
                    problems.append(f"coset {gid}: A{k + 1} {HalfInt(a)}")
    if problems:
        return problems
    f = c.field
    out = c.out_arrows()
    for s in gens:
        square: Dict[str, object] = {}
        for t, a in out[s].items():
            for u, b in out[t].items():
                square[u] = f.add(square.get(u, 0), f.mul(a, b))
        bad = sorted(u for u, v in square.items() if v)
        if bad:
            problems.append(f"d^2 != 0 on {s} (hits {', '.join(bad)})")
    return problems


def _block_map_rank(c: BifilteredComplex, sources: Sequence[str], targets: Sequence[str],
                    arrows: Iterable[Tuple[str, str, object]]) -> int:
    if not sources or not targets:
        return 0
    si = {g: k for k, g in enumerate(sources)}
    ti = {g: k for k, g in enumerate(targets)}
    entries = {}
    for s, t, v in arrows:
        if s in si and t in ti:
            entries[(ti[t], si[s])] = v
    return rank(SparseMatrix(len(targets), len(sources), entries, c.field))


def associated_graded_homology(c: BifilteredComplex) -> BigradedModule:
    """Homology of the Alexander-grading-preserving part of the differential."""
    blocks = c.blocks()
    zero_drop = [(s, t, v) for (s, t), v in c.diff.items()
                 if c.generators[s].alex == c.generators[t].alex]
    by_pair: Dict[Tuple[Grading, Grading], list] = defaultdict(list)
    for s, t, v in zero_drop:
        by_pair[(c.generators[s], c.generators[t])].append((s, t, v))
    out_rank: Dict[Grading, int] = {}
    for (gs, gt), arrows in by_pair.items():
        out_rank[gs] = _block_map_rank(c, blocks[gs], blocks[gt], arrows)
    ranks = {}
    for g, ids in blocks.items():
        below = Grading(g.alex, g.maslov - 2)
        above = Grading(g.alex, g.maslov + 2)
        r_out = out_rank.get(g, 0) if below in blocks else 0
        r_in = out_rank.get(above, 0)
        ranks[g] = len(ids) - r_out - r_in
    return BigradedModule(ranks, c.n)


def _maslov_groups(c: BifilteredComplex) -> Dict[int, List[str]]:
    groups: Dict[int, List[str]] = defaultdict(list)
    for gid, g in c.generators.items():
        groups[g.maslov].append(gid)
    return groups


def total_homology(c: BifilteredComplex) -> Dict[int, int]:
    """Homology of the full differential, graded by doubled Maslov grading."""
    groups = _maslov_groups(c)
    arrows = [(s, t, v) for (s, t), v in c.diff.items()]
    d_rank = {m: _block_map_rank(c, ids, groups.get(m - 2, []), arrows) for m, ids in groups.items()}
    out = {}
    for m, ids in sorted(groups.items()):
        h = len(ids) - d_rank[m] - d_rank.get(m + 2, 0)
        if h:
            out[m] = h
    return out


def reduce_grading_preserving(c: BifilteredComplex) -> BifilteredComplex:
    """Cancel every Alexander-grading-preserving arrow (reduction lemma).

    Pivots are taken in order (a1 desc, a2 desc, maslov desc, source id asc),
    breaking target ties by id. Cancelling x -> y with coefficient c adds
    -b*a/c to every zigzag z -> y, x -> w.
    """
    f = c.field
    gens = dict(c.generators)
    out = {g: dict(v) for g, v in c.out_arrows().items()}
    inn = {g: dict(v) for g, v in c.in_arrows().items()}

    def pivot_key(s: str):
        g = gens[s]
        return tuple(-a for a in g.alex) + (-g.maslov, s)

    while True:
        best = None
        for s in gens:
            for t, v in out[s].items():
                if gens[s].alex == gens[t].alex:
                    key = pivot_key(s) + (t,)
                    if best is None or key < best[0]:
                        best = (key, s, t, v)
        if best is None:
            break
        _, x, y, cxy = best
        inv = f.inv(cxy)
        sources = [(z, b) for z, b in inn[y].items() if z != x]
        targets = [(w, a) for w, a in out[x].items() if w != y]
        for z, b in sources:
            for w, a in targets:
                delta = f.neg(f.mul(f.mul(b, a), inv))
                nv = f.add(out[z].get(w, 0), delta)
                if nv:
                    out[z][w] = nv
                    inn[w][z] = nv
                else:
                    out[z].pop(w, None)
                    inn[w].pop(z, None)
        for g in (x, y):
            for w in list(out[g]):
                inn[w].pop(g, None)
            for z in list(inn[g]):
                out[z].pop(g, None)
            del out[g], inn[g], gens[g]
    diff = {(s, t): v for s, ts in out.items() for t, v in ts.items()}
    return BifilteredComplex(f, gens, diff)


def project_to_hfk(m: BigradedModule, n_components: Optional[int] = None,
                   maslov_shift: Optional[int] = None) -> HFKRanks:
    """Collapse the Alexander gradings to their sum and shift Maslov gradings.

    The default shift is (n-1)/2 (doubled: ``n - 1``), so that the total
    homology F_0 + F_{-1} of a two-component link lands at Maslov +-1/2.
    """
    n = m.n if n_components is None else n_components
    shift = (n - 1) if maslov_shift is None else maslov_shift
    out: Dict[Tuple[int, int], int] = defaultdict(int)
    for g, r in m.ranks.items():
        out[(sum(g.alex), g.maslov + shift)] += r
    return dict(sorted(out.items()))


def hfk_from_display(entries: Iterable[Tuple[object, object, int]]) -> HFKRanks:
    """Build HFK ranks from ``(alexander, maslov, rank)`` triples of ordinary values."""
    out: Dict[Tuple[int, int], int] = defaultdict(int)
    for a, m, r in entries:
        out[(HalfInt.of(a).doubled, HalfInt.of(m).doubled)] += r
    return dict(sorted(out.items()))


def hfk_mirror(h: Mapping[Tuple[int, int], int]) -> HFKRanks:
    return dict(sorted(((-a, -m), r) for (a, m), r in h.items()))


def hfk_tensor_v(h: Mapping[Tuple[int, int], int]) -> HFKRanks:
    """HFK of the split union with an unknot: tensor with F_{1/2} + F_{-1/2}."""
    out: Dict[Tuple[int, int], int] = defaultdict(int)
    for (a, m), r in h.items():
        out[(a, m + 1)] += r
        out[(a, m - 1)] += r
    return dict(sorted(out.items()))


def empty_complex(field: Field = GF2, n: int = 2) -> BifilteredComplex:
    c = BifilteredComplex(field)
    c.n = n
    return c
