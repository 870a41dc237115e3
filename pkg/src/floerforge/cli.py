"""Command line interface: ``floerforge <command> ...``.

Exit codes: 0 success or verdict reproduced, 1 verdict mismatch, 2 input
error, 3 internal invariant breach.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from . import botany, catalog, khovanov
from .complexes import (
    BifilteredComplex,
    BigradedModule,
    ComplexError,
    ComponentData,
    associated_graded_homology,
    format_hfk,
    project_to_hfk,
    total_homology,
    validate_complex,
)
from .constraints import FAIL, RULE_ORDER, gauntlet
from .decomposition import Decomposition, DecompositionError, decompose_e2, summand_census_oracle, verify_decomposition
from .exactalg import ExactAlgError, HalfInt, LaurentPoly, field_from_name, laurent_mul, parse_laurent
from .invariants import (
    LOWEST_TERM,
    STRICT_HOSTE,
    InvariantError,
    alexander_single,
    conway_from_alexander,
    delta_spectrum,
    dual_thurston_axis_slice,
    floer_polytope,
    linking_from_conway,
)

SCHEMA = "floerforge/1"

OK, MISMATCH, INPUT_ERROR, INTERNAL = 0, 1, 2, 3

INPUT_ERRORS = (ComplexError, DecompositionError, ExactAlgError, InvariantError, catalog.CatalogError,
                botany.BotanyError, khovanov.KhovanovError, OSError, json.JSONDecodeError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _load_complex(path: str, field_name: Optional[str] = None) -> BifilteredComplex:
    data = _read_json(path)
    if isinstance(data, dict) and "decomposition" in data:
        c = Decomposition.parse(data["decomposition"]).realize(field_from_name(field_name or "gf2"))
    else:
        c = BifilteredComplex.from_json(data)
    if field_name:
        c = c.with_field(field_from_name(field_name))
    return c


def _load_module(path: str) -> BigradedModule:
    """A module JSON, a complex JSON (its associated graded homology) or a
    decomposition JSON."""
    data = _read_json(path)
    if isinstance(data, dict) and "ranks" in data:
        return BigradedModule.from_json(data)
    return associated_graded_homology(_load_complex(path))


def _parse_half(text: str) -> int:
    return HalfInt.of(text).doubled


def _window_bounds(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (1, 2):
        raise UsageError("--window takes one bound or two comma-separated bounds")
    vals = [_parse_half(p) for p in parts]
    return vals[0], (vals[1] if len(vals) == 2 else None)


def _rules(text: str) -> List[str]:
    if text == "all":
        return list(RULE_ORDER)
    rules = [r.strip() for r in text.split(",") if r.strip()]
    unknown = sorted(set(rules) - set(RULE_ORDER))
    if unknown:
        raise UsageError(f"unknown rules {unknown}; choose from {list(RULE_ORDER)}")
    return rules


def _bools(text: Optional[str], n: int):
    if text is None:
        return ()
    vals = [v.strip().lower() in ("1", "y", "yes", "true") for v in text.split(",")]
    if len(vals) != n:
        raise UsageError(f"expected {n} comma-separated flags, got {text!r}")
    return tuple(vals)


def _component_data(args, n: int) -> ComponentData:
    lk = {(0, 1): args.lk} if n == 2 and args.lk is not None else {}
    return ComponentData(n, lk, args.fibered or None, _bools(args.unknotted, n), (), args.chi)


# ---------------------------------------------------------------------------
# commands; each returns (exit code, json payload, text)
# ---------------------------------------------------------------------------

def cmd_validate(args):
    c = _load_complex(args.file, args.field)
    problems = validate_complex(c)
    payload = {"valid": not problems, "problems": problems, "generators": len(c)}
    text = "ok" if not problems else "invalid\n" + "\n".join(f"  {p}" for p in problems)
    return (OK if not problems else MISMATCH), payload, text


def cmd_homology(args):
    c = _load_complex(args.file, args.field)
    problems = validate_complex(c)
    if problems:
        raise ComplexError("; ".join(problems))
    m = associated_graded_homology(c)
    th = total_homology(c)
    hfk = project_to_hfk(m)
    payload = {"module": m.to_json(), "total": {str(HalfInt(k)): v for k, v in th.items()},
               "hfk": [[a, mm, r] for (a, mm), r in hfk.items()],
               "delta": delta_spectrum(m).render()}
    lines = ["associated graded homology:"]
    lines += [f"  {g}  rank {r}" for g, r in m.ranks.items()]
    lines.append("total homology: " + (" + ".join(f"F_{{{HalfInt(k)}}}^{v}" if v > 1 else f"F_{{{HalfInt(k)}}}"
                                                for k, v in th.items()) or "0"))
    lines.append("HFK: " + format_hfk(hfk))
    lines.append("delta gradings: " + delta_spectrum(m).render())
    return OK, payload, "\n".join(lines)


def cmd_decompose(args):
    c = _load_complex(args.file, args.field)
    d = decompose_e2(c)
    census = summand_census_oracle(c)
    problems = verify_decomposition(c, d)
    agree = census == d
    payload = {"decomposition": d.strings(), "census": census.strings(), "routes_agree": agree,
               "verify": problems}
    if not agree or problems:
        payload["bug"] = "decomposition routes disagree; please report with the input file"
        return INTERNAL, payload, "internal: routes disagree\n" + json.dumps(payload, indent=1)
    return OK, payload, " + ".join(d.strings()) or "0"


def _alexander_input(args) -> LaurentPoly:
    if args.alexander is not None:
        return parse_laurent(args.alexander)
    if args.complex is None:
        raise UsageError("conway needs --complex FILE or --alexander POLY")
    data = _read_json(args.complex)
    if isinstance(data, dict) and "alexander" in data:
        parts = data["alexander"]
        if isinstance(parts, str):
            parts = [parts]
        out = LaurentPoly.one(1)
        for p in parts:
            out = laurent_mul(out, parse_laurent(p))
        return out
    m = _load_module(args.complex)
    return alexander_single(m)


def cmd_conway(args):
    delta = _alexander_input(args)
    nabla = conway_from_alexander(delta)
    lk = linking_from_conway(nabla, args.mode)
    payload = {"alexander": delta.render(), "conway": nabla.render(("u",)), "mode": args.mode, "lk": lk}
    text = f"Delta(t) = {delta.render()}\nnabla(u) = {nabla.render(('u',))}\nlk ({args.mode}) = {lk}"
    return OK, payload, text


def cmd_polytope(args):
    m = _load_module(args.file)
    p = floer_polytope(m)
    slices = {}
    for axis in (1, 2):
        try:
            s = dual_thurston_axis_slice(m, axis)
            slices[axis] = [str(s.support_interval[0]), str(s.support_interval[1])]
        except InvariantError as exc:
            slices[axis] = str(exc)
    payload = {"vertices": [[str(a), str(b)] for a, b in p.half_vertices], "dual_thurston_slices": slices}
    lines = ["polytope vertices: " + p.render()]
    for axis, s in slices.items():
        lines.append(f"dual Thurston slice on axis {axis}: " + (f"[{s[0]}, {s[1]}]" if isinstance(s, list) else s))
    return OK, payload, "\n".join(lines)


def cmd_gauntlet(args):
    m = _load_module(args.file)
    cd = _component_data(args, m.n)
    reports = gauntlet(m, cd, _rules(args.rules))
    fail = next((r for r in reports if r.verdict == FAIL), None)
    payload = {"reports": [r.to_json() for r in reports], "eliminated": fail is not None,
               "first_failure": fail.rule if fail else None}
    lines = [f"{r.rule:22s} {r.verdict:12s} {r.witness}".rstrip() for r in reports]
    lines.append("eliminated by " + fail.rule if fail else "survives")
    return (MISMATCH if fail else OK), payload, "\n".join(lines)


def cmd_botany(args):
    if args.window is None or args.budget is None:
        raise UsageError("botany needs --window and --budget")
    b1, b2 = _window_bounds(args.window)
    w = botany.SearchWindow(b1, args.budget, args.lk or 0, args.field or "gf2", b2)
    if args.fixed is None:
        res = botany.classify_rank_thin(args.budget, w)
        payload = {"mode": "thin", "candidates": len(res.candidates),
                   "survivors": [c.key for c in res.survivors],
                   "unlinks": [c.label or c.key for c in res.unlinks], "ledger": res.ledger}
        lines = [f"{len(res.candidates)} thin candidates, {len(res.survivors)} survivors"]
        lines += [f"  survivor: {c.key}" for c in res.survivors]
        lines += [f"  unlink pattern: {c.label or c.key}" for c in res.unlinks]
        return OK, payload, "\n".join(lines)
    spec = _read_json(args.fixed)
    fixed = Decomposition.parse(spec.get("fixed", []))
    slots = [botany.BoxSlot(_parse_half(str(s["d"])), _parse_half(str(s["diagonal"]))) for s in spec.get("slots", [])]
    cands = botany.enumerate_candidates(w, fixed, slots, symmetric=spec.get("symmetric", True))
    botany.label_offsets(cands)
    n = 2
    cd = _component_data(args, n)
    survivors, ledger = botany.run_gauntlet(cands, _rules(args.rules), cd, threads=args.threads)
    payload = {"mode": "slots", "candidates": [c.key for c in cands], "survivors": [c.key for c in survivors],
               "ledger": ledger}
    lines = [f"{len(cands)} candidates"]
    for row in ledger:
        tag = row["label"] + " " if row["label"] else ""
        verdict = "survivor" if row["rule"] is None else f"eliminated by {row['rule']}: {row['witness']}"
        lines.append(f"  {tag}{row['candidate']}\n      {verdict}")
    return OK, payload, "\n".join(lines)


def _kh_table(ref: str) -> khovanov.KhTable:
    p = Path(ref)
    if p.suffix == ".json" and p.exists():
        return khovanov.KhTable.from_json(_read_json(ref))
    e = catalog.lookup(ref)
    if e.kh is None:
        raise catalog.CatalogError(f"no Khovanov table stored for {ref!r}")
    return e.kh


def cmd_kh(args):
    t = _kh_table(args.table)
    gf2, q = khovanov.total_rank(t, "gf2"), khovanov.total_rank(t, "q")
    lee = khovanov.lee_data(t)
    thin = khovanov.kh_thin_s_chi(t)
    payload = {"gf2": gf2, "q": q, "torsion": t.torsion_count(), "reduced_gf2": khovanov.reduced_rank_f2(t),
               "lee_gradings": list(lee.gradings), "components_at_most": lee.n_components, "lk": lee.linking,
               "thin": thin.thin, "s": thin.s, "chi_at_most": thin.chi_bound,
               "dowlin": khovanov.dowlin_bound(khovanov.reduced_rank_f2(t), max(lee.n_components, 1))}
    lines = [f"rank GF(2) {gf2}, rank Q {q}, torsion classes {t.torsion_count()}, reduced GF(2) {payload['reduced_gf2']}",
             f"Lee gradings {list(lee.gradings)}: at most {lee.n_components} components, lk {lee.linking}",
             f"thin {thin.thin}, s {thin.s}, chi <= {thin.chi_bound}",
             f"Dowlin bound on HFK rank: {payload['dowlin']}"]
    if args.split:
        # commas inside names such as T(2,3) do not separate knots
        knots = re.split(r",(?![^()]*\))", args.split)
        if len(knots) != 2:
            raise UsageError("--split takes two knots, e.g. T(2,3),unknot")
        try:
            tensor = khovanov.kh_tensor(khovanov.KNOT_I_MINUS_J[knots[0]], khovanov.KNOT_I_MINUS_J[knots[1]])
        except KeyError as exc:
            raise UsageError(f"no i-j ranks stored for {exc}; known: {sorted(khovanov.KNOT_I_MINUS_J)}")
        rep = khovanov.batson_seed_check(khovanov.i_minus_j(khovanov.uct_ranks(t, "q")), tensor, args.lk or 0)
        payload["batson_seed"] = {"tensor": khovanov.format_graded(tensor), **rep.to_json()}
        lines.append(f"split tensor {khovanov.format_graded(tensor)}: {rep.verdict} {rep.witness}".rstrip())
    return OK, payload, "\n".join(lines)


def cmd_catalog(args):
    if args.action == "list":
        ids = catalog.list_ids()
        return OK, {"ids": ids}, "\n".join(ids)
    if args.action == "show":
        if not args.id:
            raise UsageError("catalog show needs a link id")
        e = catalog.lookup(args.id)
        payload = e.to_json()
        lines = [f"{e.id}: {e.n} component(s)" + (f", lk {e.lk}" if e.lk is not None else ""),
                 f"source: {e.source}", f"status: {e.status}"]
        if e.decomposition is not None:
            lines.append("complex: " + " + ".join(e.decomposition.strings()))
        if e.hfk is not None:
            lines.append("HFK: " + format_hfk(e.hfk))
        for k, h in enumerate(e.hfk_candidates, 1):
            lines.append(f"HFK candidate {k}: " + format_hfk(h))
        return OK, payload, "\n".join(lines)
    lines_ = catalog.selfcheck_catalog()
    bad = [l for l in lines_ if l.verdict == FAIL]
    payload = {"checks": len(lines_), "failures": [l.to_json() for l in bad]}
    text = f"{len(lines_)} checks, {len(bad)} failures" + "".join(
        f"\n  {l.link}: {l.check}: {l.witness}" for l in bad)
    return (MISMATCH if bad else OK), payload, text


def cmd_detect(args):
    res = botany.detect(args.target, threads=args.threads)
    payload = res.to_json()
    lines = []
    for s in res.steps:
        s = dict(s)
        if s.get("step") == "gauntlet":
            lines.append(f"[{s['stage']}] gauntlet")
            for row in s["ledger"]:
                verdict = "survivor" if row["rule"] is None else f"eliminated by {row['rule']}: {row['witness']}"
                lines.append(f"    {row['label']}: {verdict}")
            continue
        stage, step = s.pop("stage"), s.pop("step")
        lines.append(f"[{stage}] {step}: " + ", ".join(f"{k}={v}" for k, v in s.items()))
    lines.append(f"survivors: {[c.label for c in res.survivors]}")
    lines.append(f"verdict: {res.verdict} (expected {res.expected})")
    return (OK if res.reproduced else MISMATCH), payload, "\n".join(lines)


COMMANDS = {
    "validate": cmd_validate, "homology": cmd_homology, "decompose": cmd_decompose, "conway": cmd_conway,
    "polytope": cmd_polytope, "gauntlet": cmd_gauntlet, "botany": cmd_botany, "kh": cmd_kh,
    "catalog": cmd_catalog, "detect": cmd_detect,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--field", choices=["gf2", "q"], default=None)
    common.add_argument("--threads", type=int, default=1)

    p = _Parser(prog="floerforge", description="Exact algebra for link Floer and Khovanov detection arguments.")
    p.add_argument("--version", action="version", version=f"floerforge {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name in ("validate", "homology", "decompose", "polytope"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("file")

    sp = sub.add_parser("conway", parents=[common])
    sp.add_argument("--complex", help="complex, module or {\"alexander\": ...} JSON")
    sp.add_argument("--alexander", help="Alexander polynomial text")
    sp.add_argument("--mode", choices=[STRICT_HOSTE, LOWEST_TERM], default=LOWEST_TERM)

    hyp = _Parser(add_help=False)
    hyp.add_argument("--lk", type=int)
    hyp.add_argument("--unknotted", help="comma-separated yes/no per component")
    hyp.add_argument("--fibered", action="store_true")
    hyp.add_argument("--chi", type=int)
    hyp.add_argument("--rules", default="all")

    sp = sub.add_parser("gauntlet", parents=[common, hyp])
    sp.add_argument("file")

    sp = sub.add_parser("botany", parents=[common, hyp])
    sp.add_argument("--window", help="bound on |a_i|, e.g. 3/2 or 2,2")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--fixed", help="JSON with fixed summands and free box slots")

    sp = sub.add_parser("kh", parents=[common])
    sp.add_argument("table", help="catalog id or Khovanov table JSON")
    sp.add_argument("--split", help="two knots for the splitting inequality, e.g. T(2,3),unknot")
    sp.add_argument("--lk", type=int)

    sp = sub.add_parser("catalog", parents=[common])
    sp.add_argument("action", choices=["list", "show", "selfcheck"])
    sp.add_argument("id", nargs="?")

    sp = sub.add_parser("detect", parents=[common])
    sp.add_argument("target", choices=["t28", "t210"])
    return p


def _emit(payload: dict, as_json: bool, text: str, stream) -> None:
    if as_json:
        stream.write(json.dumps(payload, sort_keys=True, default=str) + "\n")
    else:
        stream.write(text + "\n")


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _emit({"schema": SCHEMA, "error": {"type": "usage", "message": str(exc)}}, True, "", err)
        return INPUT_ERROR
    try:
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        code, payload, text = COMMANDS[args.command](args)
    except UsageError as exc:
        _emit({"schema": SCHEMA, "error": {"type": "usage", "message": str(exc)}}, True, "", err)
        return INPUT_ERROR
    except INPUT_ERRORS as exc:
        _emit({"schema": SCHEMA, "error": {"type": type(exc).__name__, "message": str(exc)}}, True, "", err)
        return INPUT_ERROR
    except Exception as exc:  # invariant breach inside the library
        _emit({"schema": SCHEMA, "error": {"type": "internal", "message": f"{type(exc).__name__}: {exc}",
                                           "bug": "this is a bug in floerforge; please report it with the command line and inputs"}},
              True, "", err)
        return INTERNAL
    _emit({"schema": SCHEMA, "command": args.command, "exit": code, "result": payload}, want_json, text, out)
    return code


def main() -> None:
    sys.exit(run())
