"""Command-line front end.

Exit codes: 0 success, 1 relation not verified, 2 unreadable input,
3 degenerate web, 4 disagreement between the engines or with a closed form.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .classify import EngineMismatch, RankReport, classify, engine_coefficients
from .expr import ExprError
from .obstruct import coordinate_name, free_coordinates
from .paperforms import appendix
from .relations import RelationError, load_relation, verify
from .webcalc import (
    UnsupportedD,
    WebDef,
    WebError,
    WebFrame,
    curvature_L,
    frame,
    mpq,
    mpq_alternating,
    subweb_curvature,
    subwebs,
)

EXIT_OK, EXIT_UNVERIFIED, EXIT_PARSE, EXIT_DEGENERATE, EXIT_MISMATCH = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


class Mismatch(Exception):
    pass


def load_web(path: str | Path) -> WebDef:
    """Web document ``{"label": ..., "foliations": [...]}``.

    A leading ``"x", "y"`` pair is accepted and dropped; otherwise every
    entry is a foliation after the two coordinate ones.
    """
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("foliations"), list):
        raise InputError(f"{path}: expected an object with a 'foliations' list")
    if doc.get("variables", ["x", "y"]) != ["x", "y"]:
        raise InputError(f"{path}: variables must be ['x', 'y']")
    fols = [str(f) for f in doc["foliations"]]
    if [f.replace(" ", "") for f in fols[:2]] == ["x", "y"]:
        fols = fols[2:]
    try:
        return WebDef.from_strings(fols, doc.get("label", ""))
    except ExprError as exc:
        raise InputError(f"{path}: {exc}") from None


def _r(v) -> str:
    return v.render()


def invariants(fr: WebFrame, depth: int = 2, *, allow_large: bool = False) -> dict:
    out: dict = {"K": _r(fr.K.value), "H": _r(fr.H)}
    if fr.d >= 4:
        out["a"] = _r(fr.a)
    if fr.d >= 5:
        out["b"] = _r(fr.b)
    if depth:
        out["jets"] = {k: _r(v) for k, v in fr.jets().symbol_table(depth).items()}
    out["subweb_curvatures"] = {
        "".join(map(str, t)): _r(subweb_curvature(fr, t).value) for t in subwebs(fr.d)
    }
    if fr.d in (4, 5):
        out["L"] = _r(curvature_L(fr).value)
    if fr.d == 4:
        out["MPQ"] = {k: _r(v.value) for k, v in mpq(fr).items()}
        out["MPQ_alternating_sums_agree"] = all(
            mpq(fr)[k] == v for k, v in mpq_alternating(fr).items()
        )
    return out


def kappa(fr: WebFrame, engine: str, *, allow_large: bool = False) -> dict:
    if fr.d > 5 and not allow_large:
        raise UnsupportedD(f"d = {fr.d} needs --allow-large")
    from .obstruct import kappa_multibracket, kappa_prolongation

    if fr.d > 5:
        k = kappa_prolongation(fr, allow_large=True) if engine != "multibracket" else kappa_multibracket(fr, allow_large=True)
        cs = k.coefficients
    else:
        cs = engine_coefficients(fr, engine)
    return {
        "coordinates": [coordinate_name(fr.d, j) for j in free_coordinates(fr.d)],
        "coefficients": [_r(c) for c in cs],
    }


def crosscheck(fr: WebFrame, engine: str, *, terms: bool = True) -> dict:
    """Engine against every closed form that applies to the web."""
    report = classify(fr, engine)
    out: dict = {"d": fr.d, "engine_agreement": engine == "both"}
    out.update(report.crosscheck)
    if fr.d == 5:
        out["printed_appendix"] = appendix.concrete_check(fr, report.coefficients, printed=True)
        if terms:
            out["appendix_terms"] = _term_report()
    out["mismatch"] = _mismatch(out)
    return out


def _term_report() -> dict:
    rep: dict = {"readings": [
        {"j": r.block, "row": r.row, "printed": r.printed, "chosen": r.chosen,
         "alternatives": list(r.alternatives), "note": r.note}
        for r in appendix.READINGS
    ]}
    for mode in ("repaired", "printed"):
        per = {}
        for n in range(1, 6):
            try:
                diffs = appendix.term_diff(n, repaired=mode == "repaired")
            except ExprError as exc:
                per[f"j_{n}"] = {"parse_error": str(exc).split(":")[0]}
                continue
            per[f"j_{n}"] = {
                "terms": len(diffs),
                "mismatches": [d.as_dict() for d in diffs if not d.match],
            }
        rep[mode] = per
    return rep


def _mismatch(out: dict) -> bool:
    cf = out.get("closed_forms", {})
    if cf.get("match") is False:
        return True
    for key in ("c0_equals_L", "G_compatibility_route"):
        if out.get(key) is False:
            return True
    mf = out.get("maxrank_forms")
    if isinstance(mf, dict) and mf.get("applicable", True) is not False:
        if not all(v for k, v in mf.items()):
            return True
    terms = out.get("appendix_terms", {}).get("repaired", {})
    if any(v.get("mismatches") or "parse_error" in v for v in terms.values()):
        return True
    return False


# text rendering ------------------------------------------------------------


def _text_rank(rep: RankReport) -> str:
    lines = [rep.verdict.text()]
    for c in rep.conditions:
        lines.append(f"  {c.name}: {c.status}")
    flags = [k for k, v in rep.flags.items() if v is True]
    if flags:
        lines.append("  flags: " + ", ".join(flags))
    for n in rep.flags.get("notes", []):
        lines.append(f"  note: {n}")
    return "\n".join(lines)


def _text_dict(d: dict, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in d.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text_dict(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                lines.append(pad + "  - " + ", ".join(f"{a}={b}" for a, b in item.items()))
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


def _text_crosscheck(c: dict) -> str:
    lines = []
    cf = c.get("closed_forms")
    if cf:
        lines.append(f"closed forms of the obstruction coefficients: {'MATCH' if cf.get('match') else 'MISMATCH'}")
    for key, label in (("c0_equals_L", "c_0 = L"), ("G_compatibility_route", "G_ij by compatibility")):
        if key in c:
            lines.append(f"{label}: {'MATCH' if c[key] else 'MISMATCH'}")
    if "maxrank_forms" in c:
        lines.append("maximum-rank forms: " + ", ".join(f"{k}={v}" for k, v in c["maxrank_forms"].items()))
    ex = c.get("printed_example")
    if ex:
        lines.append("typeset example values: " + ", ".join(
            f"{k}={'MATCH' if v['match'] else 'MISMATCH'}" for k, v in ex["values"].items()))
        for k, v in ex["values"].items():
            if not v["match"]:
                lines.append(f"    {k}: typeset {v['printed']}  engine {v['engine']}  ratio {v['ratio']}")
        lines.append(f"    uniform constant ratio: {ex['uniform_ratio']}")
    if "printed_J_12_agrees" in c:
        lines.append(f"printed J_12 agrees: {c['printed_J_12_agrees']}")
    if "printed_appendix" in c:
        lines.append("typeset appendix coefficients (no repairs):")
        for r in c["printed_appendix"]:
            state = "MATCH" if r.get("match") else "MISMATCH"
            lines.append(f"    {r['coefficient']}: {state}" + (f" ({r['reason']})" if r.get("reason") else ""))
    terms = c.get("appendix_terms")
    if terms:
        for mode in ("repaired", "printed"):
            for j, v in terms[mode].items():
                if "parse_error" in v:
                    lines.append(f"{mode} {j}: does not parse")
                    continue
                lines.append(f"{mode} {j}: {v['terms'] - len(v['mismatches'])}/{v['terms']} terms match")
                for m in v["mismatches"]:
                    lines.append(f"    {m['monomial']}: rows {m['rows']}  typeset {m['transcribed']}  engine {m['engine']}")
    lines.append(f"overall: {'MISMATCH' if c['mismatch'] else 'consistent'}")
    return "\n".join(lines)


# commands ------------------------------------------------------------------


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(payload, indent=2, ensure_ascii=True) + "\n")
    else:
        sys.stdout.write(text + "\n")


def _classifiable(args) -> WebFrame:
    fr = frame(load_web(args.file))
    if not 3 <= fr.d <= 5:
        raise UnsupportedD(f"classification covers d = 3, 4, 5 (got {fr.d})")
    return fr


def cmd_rank(args) -> int:
    fr = _classifiable(args)
    rep = classify(fr, args.engine)
    _emit(args, {"label": fr.web.label, "rank": rep.as_dict()}, _text_rank(rep))
    return EXIT_OK


def cmd_invariants(args) -> int:
    fr = frame(load_web(args.file))
    inv = invariants(fr, args.depth)
    payload = {"label": fr.web.label, "d": fr.d, "invariants": inv}
    if fr.d <= 5 or args.allow_large:
        payload["kappa"] = kappa(fr, args.engine, allow_large=args.allow_large)
    _emit(args, payload, _text_dict(payload))
    return EXIT_OK


def cmd_analyze(args) -> int:
    fr = _classifiable(args)
    rep = classify(fr, args.engine)
    payload = {
        "label": fr.web.label,
        "d": fr.d,
        "invariants": invariants(fr, args.depth),
        "kappa": kappa(fr, args.engine),
        "rank": rep.as_dict(),
    }
    cc = dict(rep.crosscheck)
    cc["mismatch"] = _mismatch(cc)
    payload["crosscheck"] = cc
    text = "\n".join([
        f"web {fr.web.label or args.file} (d = {fr.d})",
        _text_dict({"invariants": payload["invariants"], "kappa": payload["kappa"]}),
        _text_rank(rep),
        _text_crosscheck(cc) if cc else "",
    ])
    _emit(args, payload, text)
    return EXIT_MISMATCH if cc["mismatch"] else EXIT_OK


def cmd_crosscheck(args) -> int:
    fr = _classifiable(args)
    c = crosscheck(fr, args.engine, terms=not args.no_terms)
    _emit(args, {"label": fr.web.label, "crosscheck": c}, _text_crosscheck(c))
    return EXIT_MISMATCH if c["mismatch"] else EXIT_OK


def cmd_verify_relation(args) -> int:
    web = load_web(args.web)
    try:
        spec = load_relation(args.relation)
    except (OSError, json.JSONDecodeError, KeyError, ExprError) as exc:
        raise InputError(f"{args.relation}: {exc}") from None
    over = {}
    if args.tolerance is not None:
        over["tolerance"] = args.tolerance
    if args.samples is not None:
        over["samples"] = args.samples
    if args.seed is not None:
        over["seed"] = args.seed
    if over:
        spec = spec.with_(**over)
    v = verify(web, spec)
    text = f"{'verified' if v.verified else 'NOT verified'} ({v.mode}"
    text += f", {v.samples} samples, max residual {v.max_residual:.3e})" if v.mode == "numeric" else ")"
    if v.mode == "exact" and not v.verified:
        text += f"\n  residual x: {v.residuals['x']}\n  residual y: {v.residuals['y']}"
    _emit(args, {"label": spec.label, "relation": v.as_dict()}, text)
    return EXIT_OK if v.verified else EXIT_UNVERIFIED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="webrank", description="Rank of planar webs via the abelian-relation obstruction.")
    p.add_argument("--version", action="version", version=f"webrank {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--engine", choices=("prolongation", "multibracket", "both"), default="both")
    common.add_argument("--depth", type=int, default=2, help="jet depth listed with the invariants")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[common], help="invariants, obstruction, rank and cross-checks")
    s.add_argument("file")
    s.set_defaults(func=cmd_analyze)
    s = sub.add_parser("rank", parents=[common], help="rank verdict only")
    s.add_argument("file")
    s.set_defaults(func=cmd_rank)
    s = sub.add_parser("invariants", parents=[common], help="invariants and obstruction coefficients")
    s.add_argument("file")
    s.add_argument("--allow-large", action="store_true", help="obstruction for d > 5")
    s.set_defaults(func=cmd_invariants)
    s = sub.add_parser("crosscheck", parents=[common], help="engine against closed forms")
    s.add_argument("file")
    s.add_argument("--no-terms", action="store_true", help="skip the per-term appendix diff (d = 5)")
    s.set_defaults(func=cmd_crosscheck)
    s = sub.add_parser("verify-relation", parents=[common], help="check an abelian relation")
    s.add_argument("web")
    s.add_argument("relation")
    s.add_argument("--tolerance", type=float)
    s.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_verify_relation)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ExprError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (WebError, RelationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except EngineMismatch as exc:
        print(f"engine mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
