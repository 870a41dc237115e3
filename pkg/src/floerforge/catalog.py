"""Reference invariants for the links the detection arguments name.

Data lives in JSON assets (``catalog.json`` plus Khovanov tables). Set
FLOERFORGE_ASSETS to a directory to load a different copy.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .complexes import (
    BifilteredComplex,
    BigradedModule,
    ComponentData,
    Grading,
    HFKRanks,
    hfk_from_display,
    hfk_mirror,
    hfk_tensor_v,
    project_to_hfk,
    validate_complex,
)
from .constraints import (
    FAIL,
    ConstraintReport,
    check_fibered_top,
    check_global_degeneration,
    check_hfk_symmetry,
    check_parity_rules,
    check_symmetry,
)
from .decomposition import Decomposition
from .exactalg import GF2
from .khovanov import KhTable, dowlin_bound, kh_thin_s_chi, lee_constraint, reduced_rank_f2


class CatalogError(KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "catalog error"


@dataclass
class CatalogEntry:
    id: str
    components: ComponentData
    module: Optional[BigradedModule] = None
    hfk: Optional[HFKRanks] = None
    complex: Optional[BifilteredComplex] = None
    decomposition: Optional[Decomposition] = None
    kh: Optional[KhTable] = None
    hfk_candidates: Tuple[HFKRanks, ...] = ()
    status: str = "determined"
    source: str = ""
    notes: Dict[str, str] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.components.n_components

    @property
    def lk(self) -> Optional[int]:
        return self.components.linking(0, 1) if self.n == 2 else None

    def to_json(self) -> dict:
        out = {"id": self.id, "components": self.n, "status": self.status, "source": self.source}
        if self.n == 2:
            out["lk"] = self.lk
        cd = self.components
        out["fibered"] = cd.fibered
        out["chi"] = cd.chi
        out["unknotted"] = list(cd.unknotted)
        if self.decomposition is not None:
            out["decomposition"] = self.decomposition.strings()
        if self.module is not None:
            out["module"] = self.module.to_json()
        if self.hfk is not None:
            out["hfk"] = [[a, m, r] for (a, m), r in sorted(self.hfk.items())]
        if self.hfk_candidates:
            out["hfk_candidates"] = [[[a, m, r] for (a, m), r in sorted(h.items())] for h in self.hfk_candidates]
        if self.kh is not None:
            out["kh"] = self.kh.to_json()
        out.update(self.notes)
        return out


def assets_dir() -> Path:
    env = os.environ.get("FLOERFORGE_ASSETS")
    return Path(env) if env else Path(__file__).with_name("assets")


def torus_hfk(n: int) -> HFKRanks:
    """HFK(T(2,2n)) for n > 0: rank 1 at A = +-n, rank 2 between, Maslov (1 + 2A - 2n)/2."""
    out = {}
    for a in range(-n, n + 1):
        out[(2 * a, 1 + 2 * a - 2 * n)] = 1 if abs(a) == n else 2
    return out


def _knot_module(hfk: HFKRanks) -> BigradedModule:
    return BigradedModule({Grading((a,), m): r for (a, m), r in hfk.items()}, 1)


def _connected_sum(knot: BigradedModule, link: BigradedModule, component: int) -> BigradedModule:
    out: Dict[Grading, int] = {}
    for gk, rk in knot.ranks.items():
        for gl, rl in link.ranks.items():
            alex = list(gl.alex)
            alex[component] += gk.alex[0]
            g = Grading(tuple(alex), gl.maslov + gk.maslov)
            out[g] = out.get(g, 0) + rk * rl
    return BigradedModule(out, link.n)


def _split_union(parts: List[BigradedModule]) -> BigradedModule:
    # L1 + L2 + ... : tensor the modules, one V per extra piece
    acc = parts[0]
    for p in parts[1:]:
        out: Dict[Grading, int] = {}
        for ga, ra in acc.ranks.items():
            for gb, rb in p.ranks.items():
                for shift in (0, -2):
                    g = Grading(ga.alex + gb.alex, ga.maslov + gb.maslov + shift)
                    out[g] = out.get(g, 0) + ra * rb
        acc = BigradedModule(out, acc.n + p.n)
    return acc


def _load_kh(name: str) -> KhTable:
    with open(assets_dir() / name) as fh:
        return KhTable.from_json(json.load(fh))


def _parse_hfk(rows) -> HFKRanks:
    return hfk_from_display((a, m, int(r)) for a, m, r in rows)


@lru_cache(maxsize=None)
def _raw(path: str) -> Dict[str, dict]:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("schema") != 1:
        raise CatalogError(f"unsupported catalog schema {data.get('schema')!r}")
    return {item["id"]: item for item in data["links"]}


def _raw_entries() -> Dict[str, dict]:
    return _raw(str(assets_dir() / "catalog.json"))


def list_ids() -> List[str]:
    return list(_raw_entries())


def lookup(link_id: str) -> CatalogEntry:
    raw = _raw_entries()
    if link_id not in raw:
        raise CatalogError(f"unknown link id {link_id!r}")
    return _build(link_id, raw)


def _build(link_id: str, raw: Dict[str, dict]) -> CatalogEntry:
    item = raw[link_id]
    if "alias_of" in item:
        e = _build(item["alias_of"], raw)
        e.id = link_id
        e.notes = {"alias_of": item["alias_of"]}
        return e
    if "mirror_of" in item:
        base = _build(item["mirror_of"], raw)
        cd = base.components
        mcd = ComponentData(cd.n_components, {k: -v for k, v in cd.lk.items()}, cd.fibered,
                            cd.unknotted, cd.genus_bound, cd.chi)
        return CatalogEntry(
            link_id, mcd,
            module=base.module.mirror() if base.module is not None else None,
            hfk=hfk_mirror(base.hfk) if base.hfk is not None else None,
            complex=base.complex.dual() if base.complex is not None else None,
            source=f"mirror of {base.id}", notes={"mirror_of": base.id})
    if "split" in item:
        parts = [_build(p, raw) for p in item["split"]]
        module = _split_union([p.module for p in parts])
        n = module.n
        unknotted = tuple(u for p in parts for u in p.components.unknotted)
        # pieces of a split union do not link each other
        lks = {(i, j): 0 for i in range(n) for j in range(i + 1, n)}
        offset = 0
        for p in parts:
            for (i, j), v in p.components.lk.items():
                lks[(i + offset, j + offset)] = v
            offset += p.n
        cd = ComponentData(n, lks, False, unknotted)
        return CatalogEntry(link_id, cd, module=module, hfk=project_to_hfk(module),
                            source="split union of " + ", ".join(item["split"]))
    if "connected_sum" in item:
        spec = item["connected_sum"]
        knot, link = _build(spec["knot"], raw), _build(spec["link"], raw)
        module = _connected_sum(knot.module, link.module, spec["component"])
        cd = link.components
        unknotted = list(cd.unknotted)
        unknotted[spec["component"]] = False
        chi = None if knot.components.chi is None or cd.chi is None else knot.components.chi + cd.chi - 1
        both = bool(knot.components.fibered and cd.fibered)
        return CatalogEntry(link_id, ComponentData(cd.n_components, dict(cd.lk), both, tuple(unknotted), (), chi),
                            module=module, hfk=project_to_hfk(module),
                            source=f"connected sum of {spec['knot']} with {spec['link']}")
    n = item["components"]
    lk = {(0, 1): item["lk"]} if n == 2 and "lk" in item else {}
    cd = ComponentData(n, lk, item.get("fibered"), tuple(item.get("unknotted", ())), (), item.get("chi"))
    e = CatalogEntry(link_id, cd, source=item.get("source", ""), status=item.get("status", "determined"))
    if "decomposition" in item:
        e.decomposition = Decomposition.parse(item["decomposition"])
        e.complex = e.decomposition.realize(GF2)
        e.module = BigradedModule.from_gradings(e.complex.generators.values(), n)
    if "hfk" in item:
        e.hfk = _parse_hfk(item["hfk"])
        if n == 1:
            e.module = _knot_module(e.hfk)
    elif item.get("hfk_formula") == "torus-2-2n":
        e.hfk = torus_hfk(item["lk"])
    elif e.module is not None:
        e.hfk = project_to_hfk(e.module)
    if "hfk_candidates" in item:
        e.hfk_candidates = tuple(_parse_hfk(c) for c in item["hfk_candidates"])
    if "kh" in item:
        e.kh = _load_kh(item["kh"])
    return e


def all_entries() -> List[CatalogEntry]:
    raw = _raw_entries()
    return [_build(k, raw) for k in raw]


# ---------------------------------------------------------------------------
# self check
# ---------------------------------------------------------------------------

@dataclass
class SelfcheckLine:
    link: str
    check: str
    verdict: str
    witness: str = ""

    def to_json(self) -> dict:
        return {"link": self.link, "check": self.check, "verdict": self.verdict, "witness": self.witness}


def _report(link: str, r: ConstraintReport) -> SelfcheckLine:
    return SelfcheckLine(link, r.rule, r.verdict, r.witness)


def check_entry(e: CatalogEntry) -> List[SelfcheckLine]:
    out: List[SelfcheckLine] = []
    if e.complex is not None:
        problems = validate_complex(e.complex)
        out.append(SelfcheckLine(e.id, "validate", FAIL if problems else "pass", "; ".join(problems)))
        derived = BigradedModule.from_gradings(e.complex.generators.values(), e.n)
        if e.module is not None and derived != e.module:
            out.append(SelfcheckLine(e.id, "complex-module", FAIL, "module differs from the complex"))
    if e.module is not None:
        out.append(_report(e.id, check_symmetry(e.module)))
        if e.hfk is not None:
            proj = project_to_hfk(e.module, e.n)
            ok = proj == dict(sorted(e.hfk.items()))
            out.append(SelfcheckLine(e.id, "module-hfk", "pass" if ok else FAIL,
                                     "" if ok else "projected module differs from stored HFK"))
    hfks = ([e.hfk] if e.hfk is not None else []) + list(e.hfk_candidates)
    for k, h in enumerate(hfks):
        tag = "" if e.hfk is not None and k == 0 else f" (candidate {k + 1 - (e.hfk is not None)})"
        for r in [check_hfk_symmetry(h), check_global_degeneration(h, e.n)] + check_parity_rules(h, n=e.n):
            line = _report(e.id, r)
            line.check += tag
            out.append(line)
        if e.components.fibered:
            r = check_fibered_top(h, True, e.components.chi, e.n)
            line = _report(e.id, r)
            line.check += tag
            out.append(line)
    if e.kh is not None:
        out.append(_report(e.id, lee_constraint(e.kh, e.n, e.lk)))
        thin = kh_thin_s_chi(e.kh)
        out.append(SelfcheckLine(e.id, "kh-thin", "pass" if thin.thin else FAIL,
                                 "" if thin.thin else f"j-2i values {list(thin.deltas)}"))
        if e.hfk is not None and e.n == 2:
            bound = dowlin_bound(reduced_rank_f2(e.kh), e.n)
            total = sum(e.hfk.values())
            ok = bound >= total
            out.append(SelfcheckLine(e.id, "dowlin", "pass" if ok else FAIL,
                                     f"bound {bound}, HFK rank {total}"))
    return out


def selfcheck_catalog(entries: Optional[List[CatalogEntry]] = None) -> List[SelfcheckLine]:
    lines: List[SelfcheckLine] = []
    for e in entries if entries is not None else all_entries():
        lines.extend(check_entry(e))
    return lines
