"""Checking candidate abelian relations ``sum_i F_i(f_i) = const``.

Only the derivatives ``F_i'`` are needed: the relation holds iff
``sum_i F_i'(f_i) * df_i/dx`` and the ``y`` analogue vanish.  Rational
``F_i'`` are checked exactly in the rational function field; anything with
``ln`` is sampled numerically with mpmath at seeded rational points.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Literal, Sequence

import mpmath

from .expr import ContainsTranscendental, DomainViolation, Expr, evaluate_numeric, lower, parse, to_text
from .ratfield import PoleAtPoint, RatFunc
from .webcalc import WebDef

__all__ = [
    "Term",
    "Region",
    "AbelianRelationSpec",
    "RelationVerdict",
    "RelationError",
    "IndexOutOfRange",
    "RegionEmpty",
    "RankCeilingExceeded",
    "verify_exact",
    "verify_numeric",
    "verify",
    "combine",
    "relation_rank",
    "check_ceiling",
    "load_relation",
    "DILOG_DERIVATIVE",
]

# derivative of the Rogers dilogarithm on 0 < t < 1
DILOG_DERIVATIVE = "-(1/2)*(ln(1 - t)/t + ln(t)/(1 - t))"


class RelationError(ValueError):
    pass


class IndexOutOfRange(RelationError):
    pass


class RegionEmpty(RelationError):
    pass


class RankCeilingExceeded(RelationError):
    pass


@dataclass(frozen=True)
class Term:
    foliation: int  # 1-based
    derivative: Expr  # F' as an expression in t
    display: str = ""

    @classmethod
    def of(cls, foliation: int, text: str, display: str = "") -> "Term":
        return cls(foliation, parse(text, ("t",)), display)


@dataclass(frozen=True)
class Region:
    """Rational box, optionally cut by expressions required to be positive."""

    x: tuple[Fraction, Fraction] = (Fraction(1, 20), Fraction(19, 20))
    y: tuple[Fraction, Fraction] = (Fraction(1, 20), Fraction(19, 20))
    positive: tuple[str, ...] = ()
    floor: Fraction = Fraction(1, 1000)  # minimum |denominator| at a sample

    def constraints(self) -> list[RatFunc]:
        return [lower(parse(p)) for p in self.positive]


@dataclass(frozen=True)
class AbelianRelationSpec:
    terms: tuple[Term, ...]
    mode: Literal["exact", "numeric"] = "exact"
    region: Region = Region()
    samples: int = 50
    tolerance: float = 1e-9
    seed: int = 0
    label: str = ""

    def with_(self, **kw) -> "AbelianRelationSpec":
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d.update(kw)
        return AbelianRelationSpec(**d)


@dataclass
class RelationVerdict:
    verified: bool
    mode: str
    residuals: dict = field(default_factory=dict)
    samples: int = 0
    max_residual: float | None = None

    def as_dict(self) -> dict:
        return {
            "verified": self.verified,
            "mode": self.mode,
            "residuals": self.residuals,
            "samples": self.samples,
            "max_residual": self.max_residual,
        }


def _check_indices(web: WebDef, spec: AbelianRelationSpec) -> None:
    for t in spec.terms:
        if not 1 <= t.foliation <= web.d:
            raise IndexOutOfRange(f"foliation {t.foliation} outside 1..{web.d}")


def verify_exact(web: WebDef, spec: AbelianRelationSpec) -> RelationVerdict:
    """Both sums canonicalize to zero in the rational function field."""
    _check_indices(web, spec)
    sx = RatFunc.const(0)
    sy = RatFunc.const(0)
    for term in spec.terms:
        try:
            fp = lower(term.derivative, ("t",))
        except ContainsTranscendental:
            raise ContainsTranscendental(
                f"F' of foliation {term.foliation} is not rational; use numeric mode"
            ) from None
        f = web.foliations[term.foliation - 1]
        lam = fp.substitute({"t": f})
        sx = sx + lam * f.derivative("x")
        sy = sy + lam * f.derivative("y")
    ok = sx.is_zero() and sy.is_zero()
    return RelationVerdict(ok, "exact", {"x": sx.render(), "y": sy.render()})


def _sample_points(web: WebDef, spec: AbelianRelationSpec, count: int):
    """Up to ``count`` seeded rational points in the region, away from poles."""
    reg = spec.region
    rng = random.Random(spec.seed)
    cons = reg.constraints()
    dens = [f.denominator for f in web.foliations]
    grid = 2**20
    found = 0
    for _ in range(count * 50):
        if found == count:
            return
        px = reg.x[0] + (reg.x[1] - reg.x[0]) * Fraction(rng.randrange(1, grid), grid)
        py = reg.y[0] + (reg.y[1] - reg.y[0]) * Fraction(rng.randrange(1, grid), grid)
        pt = {"x": px, "y": py}
        try:
            if any(c.eval_at(pt) <= 0 for c in cons):
                continue
        except PoleAtPoint:
            continue
        if any(abs(_poly_at(d, pt)) < reg.floor for d in dens):
            continue
        found += 1
        yield pt


def _poly_at(p, pt) -> Fraction:
    return RatFunc(p).eval_at(pt)


def _lambdas(web: WebDef, spec: AbelianRelationSpec, pt) -> list[tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]]:
    out = []
    for term in spec.terms:
        f = web.foliations[term.foliation - 1]
        fv = mpmath.mpf(f.eval_at(pt).numerator) / f.eval_at(pt).denominator
        lam = evaluate_numeric(term.derivative, {"t": fv})
        fx, fy = (f.derivative(v).eval_at(pt) for v in ("x", "y"))
        out.append((lam, mpmath.mpf(fx.numerator) / fx.denominator, mpmath.mpf(fy.numerator) / fy.denominator))
    return out


def verify_numeric(web: WebDef, spec: AbelianRelationSpec, *, dps: int = 30) -> RelationVerdict:
    """Max of ``|sum F_i'(f_i) df_i|`` over the samples against the tolerance.

    Points where some ``F_i'`` leaves its domain are skipped like poles.
    """
    _check_indices(web, spec)
    worst = mpmath.mpf(0)
    used = 0
    with mpmath.workdps(dps):
        for pt in _sample_points(web, spec, spec.samples * 4):
            try:
                vals = _lambdas(web, spec, pt)
            except (DomainViolation, PoleAtPoint):
                continue
            rx = abs(mpmath.fsum(l * fx for l, fx, _ in vals))
            ry = abs(mpmath.fsum(l * fy for l, _, fy in vals))
            worst = max(worst, rx, ry)
            used += 1
            if used == spec.samples:
                break
    if used < spec.samples:
        raise RegionEmpty(f"only {used} of {spec.samples} samples inside every domain")
    w = float(worst)
    return RelationVerdict(w < spec.tolerance, "numeric", {}, used, w)


def verify(web: WebDef, spec: AbelianRelationSpec) -> RelationVerdict:
    return verify_exact(web, spec) if spec.mode == "exact" else verify_numeric(web, spec)


def combine(specs: Sequence[AbelianRelationSpec], coeffs: Sequence[Fraction | int]) -> AbelianRelationSpec:
    """The relation ``sum_k coeffs[k] * specs[k]``, one term per foliation."""
    by: dict[int, list[str]] = {}
    for s, c in zip(specs, coeffs):
        for t in s.terms:
            by.setdefault(t.foliation, []).append(f"({Fraction(c)})*({to_text(t.derivative)})")
    terms = tuple(Term.of(i, " + ".join(parts)) for i, parts in sorted(by.items()))
    mode = "exact" if all(s.mode == "exact" for s in specs) else "numeric"
    return specs[0].with_(terms=terms, mode=mode, label="combination")


def relation_rank(web: WebDef, specs: Sequence[AbelianRelationSpec], *, samples: int = 12, seed: int = 7) -> int:
    """Rank of the relations as vectors of ``F_i'(f_i)`` values at sample points."""
    if not specs:
        return 0
    pts = list(_sample_points(web, specs[0].with_(seed=seed), samples))
    if len(pts) < samples:
        raise RegionEmpty(f"found {len(pts)} of {samples} sample points")
    rows = []
    with mpmath.workdps(30):
        for s in specs:
            row = []
            for pt in pts:
                lam = [mpmath.mpf(0)] * web.d
                for term, (v, _, _) in zip(s.terms, _lambdas(web, s, pt)):
                    lam[term.foliation - 1] += v
                row.extend(lam)
            rows.append(row)
        m = mpmath.matrix(rows)
        sv = mpmath.svd_r(m, compute_uv=False)
        top = max(abs(x) for x in sv) if len(sv) else 0
        return sum(1 for x in sv if abs(x) > top * mpmath.mpf(10) ** -15)


def check_ceiling(web: WebDef, specs: Sequence[AbelianRelationSpec]) -> int:
    """Rank of the supplied relations; rejects more than ``(d-1)(d-2)/2``."""
    r = relation_rank(web, specs)
    bound = (web.d - 1) * (web.d - 2) // 2
    if r > bound:
        raise RankCeilingExceeded(f"{r} independent relations exceed the bound {bound}")
    return r


def _frac(v) -> Fraction:
    return Fraction(str(v)) if isinstance(v, float) else Fraction(v)


def load_relation(path: str | Path) -> AbelianRelationSpec:
    """Relation document: terms, mode, region, samples, tolerance, seed."""
    doc = json.loads(Path(path).read_text())
    return relation_from_dict(doc)


def relation_from_dict(doc: dict) -> AbelianRelationSpec:
    terms = tuple(
        Term.of(int(t["foliation"]), t["derivative"], t.get("display", "")) for t in doc["terms"]
    )
    reg = doc.get("region", {})
    region = Region(
        x=tuple(_frac(v) for v in reg.get("x", Region.x)),
        y=tuple(_frac(v) for v in reg.get("y", Region.y)),
        positive=tuple(reg.get("positive", ())),
        floor=_frac(reg.get("floor", Region.floor)),
    )
    return AbelianRelationSpec(
        terms=terms,
        mode=doc.get("mode", "exact"),
        region=region,
        samples=int(doc.get("samples", 50)),
        tolerance=float(doc.get("tolerance", 1e-9)),
        seed=int(doc.get("seed", 0)),
        label=doc.get("label", ""),
    )
