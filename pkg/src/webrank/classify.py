"""Rank decisions for 3-, 4- and 5-webs.

The engine's obstruction coefficients decide; closed forms are evaluated
alongside and recorded as corroboration in :attr:`RankReport.crosscheck`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from .obstruct import kappa_multibracket, kappa_prolongation
from .paperforms import forms
from .paperforms.forms import NotApplicable
from .ratfield import RatFunc
from .webcalc import WebFrame, curvature_L, subweb_curvature, subwebs

__all__ = [
    "Verdict",
    "Condition",
    "RankReport",
    "EngineMismatch",
    "engine_coefficients",
    "rank3",
    "rank4",
    "rank5_max",
    "special_flags",
    "classify",
    "CITATIONS",
]

Engine = Literal["prolongation", "multibracket", "both"]

CITATIONS = {
    3: "3-web criterion: maximum rank one iff parallelizable",
    "max4": "4-web maximum-rank criterion (obstruction coefficients vanish)",
    "rank2": "4-web rank-two criterion (c_0 != 0, G_ij = 0)",
    "rank1.1": "4-web rank-one criterion, case c_0 = 0, c_1 != c_2, c_1 != 0",
    "rank1.2": "4-web rank-one criterion, case c_0 = 0, c_1 = c_2 != 0",
    "rank1.3": "4-web rank-one criterion, case c_0 = 0, c_1 = 0, c_2 != 0",
    "rank1.4": "4-web rank-one criterion, case c_0 != 0 (J_10 = J_11 = J_12 = 0)",
    "max5": "5-web maximum-rank criterion (c_0 .. c_5 vanish)",
    "closed4": "closed forms of the 4-web obstruction coefficients",
    "closed5": "closed form of the top 5-web coefficient and the typeset j_1 .. j_5",
    "parallel": "parallelizability: K = 0 and constant basic invariants",
    "mayrhofer": "Mayrhofer 4-web: every 3-subweb parallelizable",
    "const4": "constant basic invariant with a nonparallelizable 3-subweb",
    "const5": "5-web with constant basic invariants: maximum rank iff parallelizable",
}


class EngineMismatch(ArithmeticError):
    """The two obstruction engines disagree on a web."""


@dataclass
class Verdict:
    kind: Literal["ExactRank", "MaxRank", "AtMostRank", "Undetermined"]
    rank: int | None
    branch: str
    reason: str = ""

    def text(self) -> str:
        if self.kind == "ExactRank":
            return f"rank {self.rank} ({self.branch})"
        if self.kind == "MaxRank":
            return f"maximum rank {self.rank} ({self.branch})"
        if self.kind == "AtMostRank":
            return f"rank at most {self.rank} ({self.branch})"
        return f"undetermined: {self.reason}"

    def as_dict(self) -> dict:
        return {"kind": self.kind, "rank": self.rank, "branch": self.branch, "reason": self.reason}


@dataclass
class Condition:
    name: str
    citation: str
    status: Literal["zero", "nonzero", "not applicable"]
    witness: str

    def as_dict(self) -> dict:
        return {"name": self.name, "citation": self.citation, "status": self.status, "witness": self.witness}


@dataclass
class RankReport:
    d: int
    verdict: Verdict
    conditions: list[Condition] = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    crosscheck: dict = field(default_factory=dict)
    coefficients: list[RatFunc] = field(default_factory=list)

    def status(self, name: str) -> str:
        for c in self.conditions:
            if c.name == name:
                return c.status
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "verdict": self.verdict.as_dict(),
            "verdict_text": self.verdict.text(),
            "conditions": [c.as_dict() for c in self.conditions],
            "flags": self.flags,
            "crosscheck": self.crosscheck,
            "coefficients": [c.render() for c in self.coefficients],
        }


def _cond(report: RankReport, name: str, citation: str, value) -> bool | None:
    """Records a condition; returns whether it vanishes (None if unavailable)."""
    if isinstance(value, NotApplicable):
        report.conditions.append(Condition(name, citation, "not applicable", str(value)))
        return None
    zero = value.is_zero()
    report.conditions.append(Condition(name, citation, "zero" if zero else "nonzero", value.render()))
    return zero


def engine_coefficients(fr: WebFrame, engine: Engine = "both") -> list[RatFunc]:
    """Obstruction coefficients, normalized so the top one equals ``L``."""
    if engine == "prolongation":
        return kappa_prolongation(fr).coefficients
    if engine == "multibracket":
        return kappa_multibracket(fr).coefficients
    if engine != "both":
        raise ValueError(f"unknown engine {engine!r}")
    p = kappa_prolongation(fr).coefficients
    m = kappa_multibracket(fr).coefficients
    for i, (x, y) in enumerate(zip(p, m)):
        if x != y:
            raise EngineMismatch(f"coefficient {i}: {x.render()} vs {y.render()}")
    return p


def rank3(fr: WebFrame) -> RankReport:
    if fr.d != 3:
        raise ValueError("rank3 needs a 3-web")
    report = RankReport(3, Verdict("Undetermined", None, ""))
    flat = _cond(report, "K", CITATIONS[3], fr.K.value)
    report.verdict = Verdict("ExactRank", 1 if flat else 0, CITATIONS[3])
    report.coefficients = [fr.K.value]
    report.flags = special_flags(fr)
    return report


def _closed4(report: RankReport, fr: WebFrame, c: list[RatFunc], st) -> None:
    try:
        closed = forms.c012_thm7(st)
    except NotApplicable as exc:
        report.crosscheck["closed_forms"] = {"applicable": False, "reason": str(exc)}
        return
    match = [x == y for x, y in zip(closed, c)]
    report.crosscheck["closed_forms"] = {
        "citation": CITATIONS["closed4"],
        "match": all(match),
        "per_coefficient": match,
    }
    report.crosscheck["c0_equals_L"] = c[0] == curvature_L(fr).value


def rank4(fr: WebFrame, engine: Engine = "both") -> RankReport:
    """Decision tree over the engine coefficients ``(c_0, c_1, c_2)``."""
    if fr.d != 4:
        raise ValueError("rank4 needs a 4-web")
    c = engine_coefficients(fr, engine)
    c0, c1, c2 = c
    report = RankReport(4, Verdict("Undetermined", None, ""), coefficients=c)
    for i, ci in enumerate(c):
        _cond(report, f"c_{i}", CITATIONS["max4"], ci)
    st = forms.symbol_table(fr, 3)
    _closed4(report, fr, c, st)
    example = forms.printed_example_check(fr, c)
    if example is not None:
        report.crosscheck["printed_example"] = example
    report.flags = special_flags(fr)

    if all(x.is_zero() for x in c):
        report.verdict = Verdict("MaxRank", 3, CITATIONS["max4"])
        _maxrank_corroboration(report, fr, st)
        return report

    forms.add_coefficients(st, fr, c)
    if not c0.is_zero():
        G = forms.rank2_G(st)
        for k, g in G.items():
            _cond(report, k, CITATIONS["rank2"], g)
        other = forms.rank2_G_compatibility(fr, c)
        report.crosscheck["G_compatibility_route"] = all(G[k] == other[k] for k in G)
        if all(g.is_zero() for g in G.values()):
            report.verdict = Verdict("ExactRank", 2, CITATIONS["rank2"])
            return report
        forms.add_rank2_data(st, fr)
        J = forms.rank1_J(st, names=("J_10", "J_11", "J_12"))
        zeros = [_cond(report, k, CITATIONS["rank1.4"], v) for k, v in J.items()]
        printed = forms.rank1_J(st, printed=True, names=("J_12",))["J_12"]
        report.crosscheck["printed_J_12_agrees"] = (
            isinstance(printed, RatFunc) and printed.is_zero() == bool(zeros[2])
        )
        rank = 1 if all(zeros) else 0
        report.verdict = Verdict("ExactRank", rank, CITATIONS["rank1.4"])
        return report

    if c1.is_zero():
        key, names = "rank1.3", ("J_4",)
    elif c1 == c2:
        key, names = "rank1.2", ("J_3",)
    else:
        key, names = "rank1.1", ("J_1", "J_2")
    J = forms.rank1_J(st, names=names)
    zeros = [_cond(report, k, CITATIONS[key], v) for k, v in J.items()]
    if any(z is None for z in zeros):
        report.verdict = Verdict(
            "Undetermined", None, CITATIONS[key], "a precondition of the matching case fails"
        )
        return report
    report.verdict = Verdict("ExactRank", 1 if all(zeros) else 0, CITATIONS[key])
    return report


def _maxrank_corroboration(report: RankReport, fr: WebFrame, st) -> None:
    try:
        K, K3, K4 = forms.maxrank4_forms(st)
        R1, R2 = forms.maxrank4_relations(st)
    except NotApplicable as exc:
        report.crosscheck["maxrank_forms"] = {"applicable": False, "reason": str(exc)}
        return
    report.crosscheck["maxrank_forms"] = {
        "K": K == fr.K.value,
        "K_3": K3 == fr.cov3(fr.K).value,
        "K_4": K4 == fr.cov4(fr.K).value,
        "R1": R1.is_zero(),
        "R2": R2.is_zero(),
    }


def rank5_max(fr: WebFrame, engine: Engine = "both", *, closed_forms: bool = True) -> RankReport:
    if fr.d != 5:
        raise ValueError("rank5_max needs a 5-web")
    from .paperforms import appendix

    c = engine_coefficients(fr, engine)
    report = RankReport(5, Verdict("Undetermined", None, ""), coefficients=c)
    for name, ci in zip(appendix.COORDINATES, c):
        _cond(report, f"c[{name}]", CITATIONS["max5"], ci)
    report.flags = special_flags(fr)
    report.crosscheck["c0_equals_L"] = c[0] == curvature_L(fr).value
    if closed_forms:
        rows = appendix.concrete_check(fr, c)
        report.crosscheck["closed_forms"] = {
            "citation": CITATIONS["closed5"],
            "match": all(r.get("match") for r in rows) if rows and rows[0]["applicable"] else None,
            "per_coefficient": rows,
        }
    if all(x.is_zero() for x in c):
        report.verdict = Verdict("MaxRank", 6, CITATIONS["max5"])
    else:
        report.verdict = Verdict("AtMostRank", 5, CITATIONS["max5"])
    return report


def special_flags(fr: WebFrame) -> dict:
    const = all(fr.pd(i, a).is_zero() for a in fr.basic[1:] for i in (1, 2))
    flat = fr.K.is_zero()
    out = {"parallelizable": flat and const, "constant_invariants": const}
    if fr.d == 4:
        out["mayrhofer"] = all(subweb_curvature(fr, t).is_zero() for t in subwebs(4))
    notes = []
    if const and fr.d == 4 and not flat:
        notes.append(CITATIONS["const4"] + ": rank 0 expected when J_10 != 0")
    if const and fr.d == 5:
        notes.append(CITATIONS["const5"] + (": parallelizable" if flat else ": not parallelizable"))
    out["notes"] = notes
    return out


def classify(fr: WebFrame, engine: Engine = "both") -> RankReport:
    if fr.d == 3:
        return rank3(fr)
    if fr.d == 4:
        return rank4(fr, engine)
    if fr.d == 5:
        return rank5_max(fr, engine)
    raise ValueError(f"no rank classification for d = {fr.d}")
