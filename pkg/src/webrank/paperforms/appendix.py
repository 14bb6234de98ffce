"""Typeset 5-web polynomials ``j_1 .. j_5`` and their checks against the engine.

The raw rows live in ``data/appendix_j.txt`` exactly as typeset (LaTeX-ish
``a_{12}``, ``b^{3}``, implicit products).  :func:`convert` turns a row
range into formula text for :mod:`webrank.symbolic`.  A handful of rows do
not parse, or parse to the wrong polynomial; each fix is a
:class:`Reading` that names the row, the printed substring, the reading
used and the rejected alternatives.  ``repaired=False`` evaluates the rows
untouched.

Coefficients of the obstruction in the coordinates ``(w_22, w_2, v_2, w, u,
v)`` are ``j_1/(3ad), j_2/(3ad), j_3/d, j_5/(6ad), j_4/(6ad)`` after the
top one, with ``d = -10 a^2 b^2 (a-1)^2 (b-1)^2 (a-b)^2``.  The printed
scales for the last two lack the factor ``d`` and pair ``j_4`` with ``u``;
:data:`PRINTED_SCALES` keeps that variant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from ..expr import ExprError
from ..obstruct import kappa_prolongation
from ..ratfield import RatFunc
from ..symbolic import eval_formula
from ..webcalc import WebFrame
from .abstract import AbstractFrame, parse_jet_var
from .forms import C0_D5, NotApplicable, _AB_CHECKS, _require_nonzero

__all__ = [
    "ROWS",
    "BLOCKS",
    "READINGS",
    "Reading",
    "TermDiff",
    "convert",
    "transcription",
    "row_jets",
    "closed_coefficients",
    "engine_coefficients_abstract",
    "term_diff",
    "concrete_check",
    "COORDINATES",
]

COORDINATES = ("w_22", "w_2", "v_2", "w", "u", "v")


@lru_cache(maxsize=1)
def _rows() -> tuple[str, ...]:
    text = resources.files(__package__).joinpath("data/appendix_j.txt").read_text()
    return tuple(text.rstrip("\n").split("\n"))


ROWS = _rows()
_HEADS = [i for i, r in enumerate(ROWS) if r.startswith("j_{")]
BLOCKS = tuple(zip(_HEADS, _HEADS[1:] + [len(ROWS)]))  # (first, end) rows of j_1 .. j_5


@dataclass(frozen=True)
class Reading:
    """One departure from the typeset rows, as a substring replacement."""

    block: int  # 1-based j index
    row: int  # 0-based row in the data file
    printed: str
    chosen: str
    alternatives: tuple[str, ...] = ()
    note: str = ""


# Each chosen reading is the one that makes the monomial diff vanish; the
# alternatives leave nonzero diffs (see tests).
READINGS: tuple[Reading, ...] = (
    Reading(2, 60, "K-3a^{2}(2+3b)", "K", note="factor typeset one row early"),
    Reading(
        2,
        61,
        "6a^{3}-b(1+2b)+a",
        "6a^{3}-b(1+2b)-3a^{2}(2+3b)+a",
        note="receives the displaced factor",
    ),
    Reading(2, 64, "a_{22}9b^{5}", "a_{22}+9b^{5}", ("a_{22}-9b^{5}",), "sign lost between terms"),
    Reading(2, 76, "+b(-4+5b)", "+(b(-4+5b)", note="opening parenthesis missing"),
    Reading(
        3,
        128,
        "+2a^{2}(-2-5b+5b^{2}+2b^{3}))Ka_{2}",
        "",
        note="fragment typeset one row early",
    ),
    Reading(
        3,
        129,
        "-6ab(-1+b^{2})",
        "-6ab(-1+b^{2})+2a^{2}(-2-5b+5b^{2}+2b^{3}))Ka_{2}",
        note="receives the displaced fragment",
    ),
    Reading(
        5,
        360,
        "Kb_{2}^{2}a^{2}bKb_{11}",
        "Kb_{2}^{2}+a^{2}bKb_{11}",
        ("Kb_{2}^{2}-a^{2}bKb_{11}",),
        "sign lost between terms",
    ),
)


def _apply(readings, choice=None) -> dict[int, str]:
    """Row overrides; ``choice`` maps a reading to the replacement to use."""
    out: dict[int, str] = {}
    for r in readings:
        text = out.get(r.row, ROWS[r.row])
        if text.count(r.printed) != 1:
            raise ValueError(f"row {r.row}: {r.printed!r} does not occur exactly once")
        repl = r.chosen if choice is None else choice.get(r, r.chosen)
        out[r.row] = text.replace(r.printed, repl)
    return out


# converter -----------------------------------------------------------------

_TOK = re.compile(
    r"\s*(?:(\d+)|([abK])(?:_\{(\d+)\})?|\^\{(\d+)\}|([()+\-;.=])|(j_\{\d\}))"
)


def _tokens(text: str):
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m:
            raise ExprError(f"cannot read {text[pos:pos + 20]!r}")
        pos = m.end()
        yield m.groups()


def convert(text: str) -> str:
    """Typeset polynomial text to formula text with explicit products."""
    out: list[str] = []
    prev = None
    for num, let, sub, pw, op, head in _tokens(text):
        if head or op in (";", ".", "="):
            continue
        if num or let or op == "(":
            if prev in ("atom", ")"):
                out.append("*")
            if num:
                out.append(num)
            elif let:
                out.append(let + ("_" + sub if sub else ""))
            else:
                out.append("(")
            prev = "(" if op == "(" else "atom"
        elif pw:
            out.append("^" + pw)
            prev = "atom"
        elif op == ")":
            out.append(")")
            prev = ")"
        else:
            out.append(op)
            prev = op
    return "".join(out)


def row_jets(row: int) -> frozenset[str]:
    """Jet symbols (``a_12``, ``K_1`` ...) mentioned in a typeset row."""
    out = set()
    for _, let, sub, *_ in _tokens(ROWS[row]):
        if let and sub:
            out.add(f"{let}_{sub}")
        elif let == "K":
            out.add("K")
    return frozenset(out)


def transcription(n: int, *, repaired: bool = True, choice=None) -> str:
    """Formula text of ``j_n``."""
    first, end = BLOCKS[n - 1]
    fixes = _apply([r for r in READINGS if r.block == n], choice) if repaired else {}
    return convert(" ".join(fixes.get(i, ROWS[i]) for i in range(first, end)))


# closed forms --------------------------------------------------------------


def _d_factor(a: RatFunc, b: RatFunc) -> RatFunc:
    return -10 * a**2 * b**2 * (a - 1) ** 2 * (b - 1) ** 2 * (a - b) ** 2


# (j index, scale) for each coordinate after the top one
def _scales(a, b, printed: bool):
    d = _d_factor(a, b)
    if printed:
        return [(1, 3 * a * d), (2, 3 * a * d), (3, d), (4, 6 * a), (5, 6 * a)]
    return [(1, 3 * a * d), (2, 3 * a * d), (3, d), (5, 6 * a * d), (4, 6 * a * d)]


PRINTED_SCALES = "c_1 = j_1/(3ad), c_2 = j_2/(3ad), c_3 = j_3/d, c_4 = j_4/(6a), c_5 = j_5/(6a)"


def closed_coefficients(st, *, printed: bool = False) -> list[RatFunc | ExprError]:
    """Obstruction coefficients in :data:`COORDINATES` order from the closed forms.

    ``printed`` uses the untouched rows together with the printed scales
    and pairing; a row range that does not parse yields its
    :class:`ExprError` in place of a value.
    """
    _require_nonzero(st, _AB_CHECKS)
    a, b = st["a"], st["b"]
    out: list[RatFunc | ExprError] = [eval_formula(C0_D5, st)]
    for n, scale in _scales(a, b, printed):
        try:
            out.append(eval_formula(transcription(n, repaired=not printed), st) / scale)
        except ExprError as exc:
            out.append(exc)
    return out


# engine side ---------------------------------------------------------------


@lru_cache(maxsize=1)
def _abstract_engine():
    fr = AbstractFrame(5)
    coeffs = kappa_prolongation(fr).coefficients
    return fr, tuple(coeffs)


def engine_coefficients_abstract() -> tuple[RatFunc, ...]:
    """Engine coefficients for d = 5 over free jet symbols (slow, cached)."""
    return _abstract_engine()[1]


@lru_cache(maxsize=1)
def _symmetric_map():
    """Normal-ordered jet variables rewritten through symmetric jet symbols."""
    fr, coeffs = _abstract_engine()
    J = fr.J
    table = J.table(4, 2, bases=("a", "b"))
    used = set().union(*(c.variables for c in coeffs))
    order = sorted(
        (v for t in table.values() for v in t.variables),
        key=lambda v: (sum(parse_jet_var(v, J.weights)[1:]), v),
    )
    inv: dict[str, RatFunc] = {}
    for v in dict.fromkeys(order):
        base, j, k = parse_jet_var(v, J.weights)
        name = base if j + k == 0 else f"{base}_{'1' * j}{'2' * k}"
        rest = table[name] - RatFunc.var(v)
        inv[v] = RatFunc.var(name) - rest.substitute(inv)
    missing = used - set(inv)
    if missing:
        raise ValueError(f"jets beyond the table: {sorted(missing)}")
    return inv, sorted(n for n in table if n not in ("a", "b"))


@dataclass
class TermDiff:
    """One monomial in the jet symbols of one coefficient."""

    coefficient: str
    j: int
    monomial: str
    transcribed: str
    engine: str
    match: bool
    rows: list[int] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "coefficient": self.coefficient,
            "j": self.j,
            "monomial": self.monomial,
            "transcribed": self.transcribed,
            "engine": self.engine,
            "match": self.match,
            "rows": self.rows,
        }


def _monomial_text(key) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in key) or "1"


def _locate(names: set[str], row_sets: dict[int, frozenset[str]]) -> list[int]:
    """Rows holding every jet of a monomial, else those holding its top jet."""
    rows = [r for r, s in row_sets.items() if names <= s]
    if rows or not names:
        return rows
    top = max(names, key=lambda n: (len(n.split("_")[-1]) if "_" in n else 0, n))
    return [r for r, s in row_sets.items() if top in s]


def term_diff(n: int, *, repaired: bool = True, choice=None, only_mismatch: bool = False) -> list[TermDiff]:
    """Compare ``j_n`` monomial by monomial with the scaled engine coefficient.

    Coefficients of each monomial are rational in ``a`` and ``b``.  Rows
    are located heuristically: a row is listed when it mentions every jet
    of the monomial, or failing that its highest-order jet.
    """
    inv, jets = _symmetric_map()
    coeffs = engine_coefficients_abstract()
    a, b = RatFunc.var("a"), RatFunc.var("b")
    slot = {j: i + 1 for i, (j, _) in enumerate(_scales(a, b, False))}[n]
    scale = dict(_scales(a, b, False))[n]
    engine = coeffs[slot].substitute(inv) * scale
    table = {name: RatFunc.var(name) for name in ["a", "b", *jets]}
    mine = eval_formula(transcription(n, repaired=repaired, choice=choice), table)
    E, T = engine.collect(jets), mine.collect(jets)
    first, end = BLOCKS[n - 1]
    row_sets = {r: row_jets(r) for r in range(first, end)}
    out = []
    for key in sorted(set(E) | set(T)):
        e = E.get(key, RatFunc.const(0))
        t = T.get(key, RatFunc.const(0))
        ok = e == t
        if only_mismatch and ok:
            continue
        names = {nm for nm, _ in key}
        rows = [] if ok else _locate(names, row_sets)
        out.append(
            TermDiff(COORDINATES[slot], n, _monomial_text(key), t.render(), e.render(), ok, rows)
        )
    return out


def concrete_check(fr: WebFrame, engine_coeffs, *, printed: bool = False) -> list[dict]:
    """Closed-form coefficients on a 5-web against given engine values."""
    st = fr.jets().symbol_table(4, 2)
    try:
        closed = closed_coefficients(st, printed=printed)
    except NotApplicable as exc:
        return [{"coefficient": c, "applicable": False, "reason": str(exc)} for c in COORDINATES]
    out = []
    for name, c, e in zip(COORDINATES, closed, engine_coeffs):
        if isinstance(c, ExprError):
            out.append({"coefficient": name, "applicable": True, "match": False, "residual": None,
                        "reason": f"transcription does not parse: {c.args[0]}"})
            continue
        diff = c - e
        out.append(
            {
                "coefficient": name,
                "applicable": True,
                "match": diff.is_zero(),
                "residual": diff.render(),
            }
        )
    return out

