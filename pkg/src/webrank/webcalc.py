"""Web frame, weighted covariant derivatives and first-layer invariants.

A web is given by first integrals ``x, y, f, g_4, ..., g_d``.  The gauge is
``omega_3 = df`` so that ``omega_1 = -f_x dx``, ``omega_2 = -f_y dy`` and both
connection coefficients equal ``H = f_xy / (f_x f_y)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .expr import parse_ratfunc
from .ratfield import RatFunc
from .symbolic import eval_formula

__all__ = [
    "WebError",
    "DegenerateWeb",
    "BasicInvariantDegenerate",
    "UnsupportedTriple",
    "UnsupportedD",
    "Weighted",
    "WebDef",
    "WebFrame",
    "JetTable",
    "frame",
    "curvature3",
    "subweb_curvature",
    "subweb_density",
    "printed_subweb_curvature",
    "subweb_curvature_structural",
    "curvature_L_structural",
    "SUBWEB_FORMULAS",
    "PRINTED_SUBWEB_FORMULAS",
    "WEDGE_FACTORS",
    "normalized_pair",
    "wedge_factor",
    "subwebs",
    "curvature_L",
    "curvature_L_printed",
    "curvature_form_from_integrals",
    "mpq",
    "mpq_alternating",
    "jet_table",
    "SUBWEBS4",
    "SUBWEBS5",
]

ZERO = RatFunc.const(0)
ONE = RatFunc.const(1)
X = RatFunc.var("x")
Y = RatFunc.var("y")


class WebError(ValueError):
    pass


class DegenerateWeb(WebError):
    pass


class BasicInvariantDegenerate(DegenerateWeb):
    pass


class UnsupportedTriple(WebError):
    pass


class UnsupportedD(WebError):
    pass


@dataclass(frozen=True)
class Weighted:
    value: RatFunc
    weight: int

    def __add__(self, other: "Weighted") -> "Weighted":
        if other.weight != self.weight:
            raise ValueError(f"adding weights {self.weight} and {other.weight}")
        return Weighted(self.value + other.value, self.weight)

    def __sub__(self, other: "Weighted") -> "Weighted":
        if other.weight != self.weight:
            raise ValueError(f"subtracting weights {self.weight} and {other.weight}")
        return Weighted(self.value - other.value, self.weight)

    def __neg__(self) -> "Weighted":
        return Weighted(-self.value, self.weight)

    def __mul__(self, other):
        if isinstance(other, Weighted):
            return Weighted(self.value * other.value, self.weight + other.weight)
        return Weighted(self.value * other, self.weight)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.value.is_zero()


def _jacobian(f: RatFunc, g: RatFunc) -> RatFunc:
    return f.derivative("x") * g.derivative("y") - f.derivative("y") * g.derivative("x")


@dataclass(frozen=True)
class WebDef:
    """Ordered first integrals; the first two must be ``x`` and ``y``."""

    foliations: tuple[RatFunc, ...]
    label: str = ""

    def __post_init__(self):
        fol = tuple(RatFunc.coerce(f) for f in self.foliations)
        object.__setattr__(self, "foliations", fol)
        if len(fol) < 3:
            raise DegenerateWeb("a web needs at least three foliations")
        if fol[0] != X or fol[1] != Y:
            raise DegenerateWeb("foliations 1 and 2 must be x and y")
        for f in fol:
            if not set(f.variables) <= {"x", "y"}:
                raise DegenerateWeb(f"foliation {f} uses variables other than x, y")
        for i in range(len(fol)):
            for j in range(i + 1, len(fol)):
                if _jacobian(fol[i], fol[j]).is_zero():
                    raise DegenerateWeb(
                        f"foliations {i + 1} and {j + 1} are not in general position"
                    )

    @classmethod
    def from_strings(cls, texts: Sequence[str], label: str = "") -> "WebDef":
        texts = list(texts)
        if texts[:2] != ["x", "y"] and not (len(texts) >= 2 and texts[0].strip() == "x"):
            texts = ["x", "y"] + texts
        return cls(tuple(parse_ratfunc(t) for t in texts), label)

    @property
    def d(self) -> int:
        return len(self.foliations)


class WebFrame:
    """Normalized frame of a web with memoized derived quantities."""

    def __init__(self, web: WebDef):
        self.web = web
        self.d = web.d
        self.f = web.foliations[2]
        self.fx = self.f.derivative("x")
        self.fy = self.f.derivative("y")
        if self.fx.is_zero() or self.fy.is_zero():
            raise DegenerateWeb("third first integral must depend on both x and y")
        self.H = self.f.derivative("x").derivative("y") / (self.fx * self.fy)
        self.K = curvature3(self.f)
        invs = []
        for k, g in enumerate(web.foliations[3:], start=4):
            a = self.fy * g.derivative("x") / (self.fx * g.derivative("y"))
            if a.is_zero() or a == 1:
                raise BasicInvariantDegenerate(f"basic invariant of foliation {k} is {a}")
            invs.append(a)
        for i in range(len(invs)):
            for j in range(i + 1, len(invs)):
                if invs[i] == invs[j]:
                    raise BasicInvariantDegenerate(
                        f"foliations {i + 4} and {j + 4} have equal basic invariants"
                    )
        # a_1 = 1 belongs to the third foliation
        self.basic = (RatFunc.const(1), *invs)
        self._jets: dict[str, JetTable] = {}

    @property
    def a(self) -> RatFunc:
        if self.d < 4:
            raise UnsupportedD("basic invariant a needs d >= 4")
        return self.basic[1]

    @property
    def b(self) -> RatFunc:
        if self.d < 5:
            raise UnsupportedD("basic invariant b needs d >= 5")
        return self.basic[2]

    def pd(self, i: int, u: RatFunc) -> RatFunc:
        if i == 1:
            return -u.derivative("x") / self.fx
        if i == 2:
            return -u.derivative("y") / self.fy
        raise ValueError(f"direction must be 1 or 2, got {i}")

    def cov(self, i: int, u: Weighted) -> Weighted:
        v = self.pd(i, u.value)
        if u.weight:
            v = v - u.weight * self.H * u.value
        return Weighted(v, u.weight + 1)

    def cov3(self, u: Weighted) -> Weighted:
        """delta_2 - delta_1."""
        return self.cov(2, u) - self.cov(1, u)

    def cov4(self, u: Weighted) -> Weighted:
        """a delta_2 - delta_1."""
        return self.a * self.cov(2, u) - self.cov(1, u)

    def jets(self, convention: str = "symmetric") -> "JetTable":
        if convention not in self._jets:
            self._jets[convention] = JetTable(self, convention)
        return self._jets[convention]


def frame(web: WebDef) -> WebFrame:
    return WebFrame(web)


def curvature3(f: RatFunc) -> Weighted:
    """K = -(f_x f_y)^-1 (log(f_x/f_y))_xy without transcendental values."""
    fx, fy = f.derivative("x"), f.derivative("y")
    if fx.is_zero() or fy.is_zero():
        raise DegenerateWeb("f must depend on both x and y")
    g = fx / fy
    log_gx = g.derivative("x") / g
    return Weighted(-log_gx.derivative("y") / (fx * fy), 2)


BASE_WEIGHT = {"a": 0, "b": 0, "K": 2}


class JetTable:
    """Covariant derivatives of ``a``, ``b`` and ``K`` indexed by multi-indices.

    ``convention`` selects how a multi-index such as ``112`` maps to a
    composition of covariant derivatives:

    * ``"symmetric"``: mean over the distinct orderings;
    * ``"ordered"``: ``delta_2 delta_1 delta_1`` (first subscript applied first);
    * ``"reversed"``: ``delta_1 delta_1 delta_2`` (last subscript applied first).
    """

    CONVENTIONS = ("symmetric", "ordered", "reversed")

    def __init__(self, fr: WebFrame, convention: str = "symmetric"):
        if convention not in self.CONVENTIONS:
            raise ValueError(f"unknown convention {convention!r}")
        self.frame = fr
        self.convention = convention
        self._seq: dict[tuple[str, tuple[int, ...]], Weighted] = {}
        self._sym: dict[tuple[str, tuple[int, ...]], Weighted] = {}

    def base(self, name: str) -> Weighted:
        fr = self.frame
        if name == "a":
            return Weighted(fr.a, 0)
        if name == "b":
            return Weighted(fr.b, 0)
        if name == "K":
            return fr.K
        raise KeyError(name)

    def sequence(self, name: str, seq: tuple[int, ...]) -> Weighted:
        """Apply ``delta_{seq[0]}`` first, then ``delta_{seq[1]}`` and so on."""
        key = (name, seq)
        hit = self._seq.get(key)
        if hit is None:
            if not seq:
                hit = self.base(name)
            else:
                hit = self.frame.cov(seq[-1], self.sequence(name, seq[:-1]))
            self._seq[key] = hit
        return hit

    def get(self, name: str, index: Iterable[int] | str) -> Weighted:
        idx = tuple(int(c) for c in index)
        if self.convention == "ordered":
            return self.sequence(name, idx)
        if self.convention == "reversed":
            return self.sequence(name, idx[::-1])
        key = (name, tuple(sorted(idx)))
        hit = self._sym.get(key)
        if hit is None:
            orders = sorted(set(permutations(key[1])))
            acc = self.sequence(name, orders[0]).value
            for o in orders[1:]:
                acc = acc + self.sequence(name, o).value
            if len(orders) > 1:
                acc = acc / len(orders)
            hit = Weighted(acc, BASE_WEIGHT[name] + len(idx))
            self._sym[key] = hit
        return hit

    def symbol_table(self, depth: int = 3, k_depth: int | None = None) -> dict[str, RatFunc]:
        """Names like ``a``, ``a_12``, ``K_2`` mapped to their values.

        ``depth`` bounds the order for ``a``/``b``; ``k_depth`` (default
        ``depth - 1``) bounds it for ``K``.
        """
        if k_depth is None:
            k_depth = max(depth - 1, 0)
        fr = self.frame
        bases = ["a", "b"][: max(0, fr.d - 3)]
        table = {"K": fr.K.value}
        for name in bases:
            for idx in _multi_indices(depth):
                table[_jet_name(name, idx)] = self.get(name, idx).value
        for idx in _multi_indices(k_depth):
            table[_jet_name("K", idx)] = self.get("K", idx).value
        if fr.d >= 4:
            table["a_3"] = table["a_2"] - table["a_1"] if depth >= 1 else None
            table["a_4"] = fr.a * table["a_2"] - table["a_1"] if depth >= 1 else None
        return {k: v for k, v in table.items() if v is not None}


def _multi_indices(depth: int):
    """Sorted multi-indices of length 0..depth over {1, 2}."""
    out = [()]
    for n in range(1, depth + 1):
        for ones in range(n, -1, -1):
            out.append((1,) * ones + (2,) * (n - ones))
    return out


def _jet_name(name: str, idx: tuple[int, ...]) -> str:
    return name if not idx else f"{name}_{''.join(map(str, idx))}"


def jet_table(fr: WebFrame, depth: int = 3, convention: str = "symmetric") -> dict[str, RatFunc]:
    if depth > 4:
        raise ValueError("jet depth above 4 is not supported")
    return fr.jets(convention).symbol_table(depth)


# subweb curvatures -------------------------------------------------------

PRINTED_SUBWEB_FORMULAS = {
    (1, 2, 3): "K",
    (1, 2, 4): "(1/a)*(K - a_12/a + a_1*a_2/a^2)",
    (1, 3, 4): "1/(a - 1)*(K + a_2*(a_1 - a_2)/(1 - a)^2 + (a_12 - a_22)/(1 - a))",
    (2, 3, 4): (
        "1/(a*(a - 1))*(K + (2*a - 1)*a_1*(a_1 - a_2)/(a^2*(1 - a)^2)"
        " + (a_11 - a_12)/(a*(1 - a)))"
    ),
    (1, 2, 5): "(1/b)*(K - b_12/b + b_1*b_2/b^2)",
    (1, 3, 5): "1/(b - 1)*(K + b_2*(b_1 - b_2)/(1 - b)^2 + (b_12 - b_22)/(1 - b))",
    (2, 3, 5): (
        "1/(b*(b - 1))*(K + (2*b - 1)*b_1*(b_1 - b_2)/(b^2*(1 - b)^2)"
        " + (b_11 - b_12)/(b*(1 - b)))"
    ),
    (1, 4, 5): (
        "(K - a_22)/(b - a) + (b_12 - a_12 + a*(a_22 - b_22))/(a - b)^2"
        " + (b_2 - a_2)*(a_2*b - a*b_2 - a_1 + b_1)/(a - b)^3"
    ),
    (2, 4, 5): (
        "b*K/(a*(b - a)) - (a*a_12 - a_1*a_2)/(a^3*(b - a))"
        " + (a_11*b - a*b_11)/(a^2*b*(b - a)^2)"
        " - (a_12*b + a_1*b_2 - a_2*b_1 - a*b_12)/(a*b*(b - a)^2)"
        " + (a_1*b - a*b_1)*(2*b*b_2 - a*b_2 - a_2*b)/(a*b^2*(b - a)^3)"
        " - (a_1*b - a*b_1)*(a_1*b^2 + 2*a*b*(b_1 - a_1) - a^2*b_1)/(a^3*b^2*(b - a)^3)"
    ),
    (3, 4, 5): (
        "K/((a - 1)*(b - 1)*(b - a))"
        " - a*a_2*(b_1 - a_1 - b_2 + a_2)/((a - 1)^3*(b - 1)*(b - a)^2)"
        " + a_2*(a*b_2 - b_1 + (b - 1)*a_2)/((a - 1)^3*(b - 1)^2*(b - a))"
        " + a_1*(b_1 - a_1 - b_2 + a_2)/((a - 1)^3*(b - 1)*(b - a)^2)"
        " + a_1*(a*b_2 - b_1 + (b - 1)*a_2)/((a - 1)^3*(b - 1)^2*(b - a))"
        " - a*(b_12 - a_12 - b_22 + a_22)/((a - 1)^2*(b - 1)*(b - a)^2)"
        # the printed numerator here is missing its closing parenthesis
        " - a_2*(b_1 - a_1 - b_2 + a_2)/((a - 1)^2*(b - 1)*(b - a)^2)"
        " + a*(b_1 - a_1 - b_2 + a_2)*(b_2 - a_2)/((a - 1)^2*(b - 1)*(b - a)^3)"
        " - (b_1 - a*b_2)*b_2/((a - 1)^2*(b - 1)^3*(b - a))"
        " - (a_2*b_2 - b_12 + a*b_22 + (b - 1)*a_22)/((a - 1)^2*(b - 1)^2*(b - a))"
        " + (b_1 - a_1 - b_2 + a_2)*(b_1 - a_1)/((a - 1)^2*(b - 1)*(b - a)^3)"
        " - (b_11 - a_11 - b_12 + a_12)/((a - 1)^2*(b - 1)*(b - a)^2)"
        " - (-b_11 + a_1*b_2 + a*b_12 + (b - 1)*a_12)/((a - 1)^2*(b - 1)^2*(b - a))"
        " - (b_1 - a*b_2)*b_1/((a - 1)^2*(b - 1)^3*(b - a))"
    ),
}

# Closed forms of the subweb curvatures in the scale of WEDGE_FACTORS.
# The last three differ from PRINTED_SUBWEB_FORMULAS; each was rederived from
# the structure equations and checked against first integrals.
SUBWEB_FORMULAS = {
    **{t: PRINTED_SUBWEB_FORMULAS[t] for t in [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4), (1, 2, 5), (1, 3, 5), (2, 3, 5)]},
    (1, 4, 5): (
        "(K - a_22)/(b - a) - (b_12 - a_12 + a*(a_22 - b_22))/(a - b)^2"
        " - (b_2 - a_2)*(a_2*b - a*b_2 - a_1 + b_1)/(a - b)^3"
    ),
    (2, 4, 5): (
        "b*K/(a*(b - a)) + b*(-(a*a_12 - a_1*a_2)/(a^3*(b - a))"
        " + (a_11*b - a*b_11)/(a^2*b*(b - a)^2)"
        " - (a_12*b + a_1*b_2 - a_2*b_1 - a*b_12)/(a*b*(b - a)^2)"
        " + (a_1*b - a*b_1)*(2*b*b_2 - a*b_2 - a_2*b)/(a*b^2*(b - a)^3)"
        " - (a_1*b - a*b_1)*(a_1*b^2 + 2*a*b*(b_1 - a_1) - a^2*b_1)/(a^3*b^2*(b - a)^3))"
    ),
    (3, 4, 5): (
        "K/((a - 1)*(b - 1)*(b - a))"
        " - a*a_2*(b_1 - a_1 - b_2 + a_2)/((a - 1)^3*(b - 1)*(b - a)^2)"
        " - a_2*(a*b_2 - b_1 + (b - 1)*a_2)/((a - 1)^3*(b - 1)^2*(b - a))"
        " + a_1*(b_1 - a_1 - b_2 + a_2)/((a - 1)^3*(b - 1)*(b - a)^2)"
        " + a_1*(a*b_2 - b_1 + (b - 1)*a_2)/((a - 1)^3*(b - 1)^2*(b - a))"
        " + a*(b_12 - a_12 - b_22 + a_22)/((a - 1)^2*(b - 1)*(b - a)^2)"
        " + a_2*(b_1 - a_1 - b_2 + a_2)/((a - 1)^2*(b - 1)*(b - a)^2)"
        " - a*(b_1 - a_1 - b_2 + a_2)*(b_2 - a_2)/((a - 1)^2*(b - 1)*(b - a)^3)"
        " + (b_1 - a*b_2)*b_2/((a - 1)^2*(b - 1)^3*(b - a))"
        " + (a_2*b_2 - b_12 + a*b_22 + (b - 1)*a_22)/((a - 1)^2*(b - 1)^2*(b - a))"
        " + (b_1 - a_1 - b_2 + a_2)*(b_1 - a_1)/((a - 1)^2*(b - 1)*(b - a)^3)"
        " - (b_11 - a_11 - b_12 + a_12)/((a - 1)^2*(b - 1)*(b - a)^2)"
        " - (-b_11 + a_1*b_2 + a*b_12 + (b - 1)*a_12)/((a - 1)^2*(b - 1)^2*(b - a))"
        " - (b_1 - a*b_2)*b_1/((a - 1)^2*(b - 1)^3*(b - a))"
    ),
}

SUBWEBS4 = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
SUBWEBS5 = SUBWEBS4 + [(1, 2, 5), (1, 3, 5), (2, 3, 5), (1, 4, 5), (2, 4, 5), (3, 4, 5)]

# Wedge factors w with (normalized pair of the subweb) = w * omega_1 ^ omega_2.
WEDGE_FACTORS = {
    (1, 2, 3): "1",
    (1, 2, 4): "a",
    (1, 3, 4): "a - 1",
    (2, 3, 4): "a*(a - 1)",
    (1, 2, 5): "b",
    (1, 3, 5): "b - 1",
    (2, 3, 5): "b*(b - 1)",
    (1, 4, 5): "b - a",
    (2, 4, 5): "a*(b - a)/b",
    (3, 4, 5): "(a - 1)*(b - 1)*(b - a)",
}

# The ten-term sum as printed weights [2,4,5] by the reciprocal factor.
PRINTED_WEDGE_245 = "b/(a*(b - a))"


def _form_coords(fr: WebFrame, k: int) -> tuple[RatFunc, RatFunc]:
    """Coordinates of omega_k in the (omega_1, omega_2) coframe."""
    if k == 1:
        return ONE, ZERO
    if k == 2:
        return ZERO, ONE
    if not 3 <= k <= fr.d:
        raise UnsupportedTriple(f"foliation {k} does not exist for d = {fr.d}")
    return -fr.basic[k - 3], -ONE


def normalized_pair(fr: WebFrame, triple: Sequence[int]) -> tuple[RatFunc, RatFunc, RatFunc, RatFunc]:
    """``(p, q, r, s)`` with ``theta_l = p w1 + q w2``, ``theta_m = r w1 + s w2``.

    Scaled so that ``theta_l + theta_m = -omega_n``.
    """
    l, m, n = _check_triple(fr, triple)
    pl, ql = _form_coords(fr, l)
    pm, qm = _form_coords(fr, m)
    pn, qn = _form_coords(fr, n)
    det = pl * qm - ql * pm
    if det.is_zero():
        raise DegenerateWeb(f"foliations {l} and {m} coincide")
    al = (-pn * qm + qn * pm) / det
    be = (-pl * qn + ql * pn) / det
    return al * pl, al * ql, be * pm, be * qm


def _check_triple(fr: WebFrame, triple: Sequence[int]) -> tuple[int, int, int]:
    t = tuple(int(k) for k in triple)
    if len(t) != 3 or len(set(t)) != 3 or any(not 1 <= k <= fr.d for k in t):
        raise UnsupportedTriple(f"{list(t)} is not a 3-subweb of a {fr.d}-web")
    return tuple(sorted(t))


def subweb_density(fr: WebFrame, triple: Sequence[int]) -> Weighted:
    """``d gamma / (omega_1 ^ omega_2)`` for the Chern connection of a 3-subweb.

    Solves ``d theta = theta ^ gamma`` for a normalized pair; the result does
    not depend on the common scale of the pair.
    """
    p, q, r, s = normalized_pair(fr, triple)
    pd = fr.pd
    e1 = pd(1, q) - pd(2, p)
    e2 = pd(1, s) - pd(2, r)
    # p beta - q alpha = e1,  r beta - s alpha = e2
    det = p * s - q * r
    beta = (s * e1 - q * e2) / det
    alpha = (r * e1 - p * e2) / det
    return fr.K + fr.cov(1, Weighted(beta, 1)) - fr.cov(2, Weighted(alpha, 1))


def wedge_factor(fr: WebFrame, triple: Sequence[int]) -> RatFunc:
    t = _check_triple(fr, triple)
    if t in WEDGE_FACTORS and fr.d >= max(t):
        return eval_formula(WEDGE_FACTORS[t], _ab_table(fr))
    p, q, r, s = normalized_pair(fr, t)
    return p * s - q * r


def _ab_table(fr: WebFrame) -> dict[str, RatFunc]:
    names = ["a", "b"][: max(0, fr.d - 3)]
    return {n: fr.basic[k + 1] for k, n in enumerate(names)}


def subweb_curvature(fr: WebFrame, triple: Sequence[int], *, convention: str = "symmetric") -> Weighted:
    """Closed-form curvature of an enumerated 3-subweb (d = 4 or 5)."""
    t = _check_triple(fr, triple)
    allowed = SUBWEBS4 if fr.d == 4 else SUBWEBS5 if fr.d == 5 else [(1, 2, 3)]
    if t not in allowed:
        raise UnsupportedTriple(f"subweb {list(t)} is not enumerated for d = {fr.d}")
    table = fr.jets(convention).symbol_table(2, 0)
    return Weighted(eval_formula(SUBWEB_FORMULAS[t], table), 2)


def printed_subweb_curvature(fr: WebFrame, triple: Sequence[int]) -> Weighted:
    """Same as :func:`subweb_curvature` but with the formula text as printed."""
    t = _check_triple(fr, triple)
    if t not in PRINTED_SUBWEB_FORMULAS or fr.d not in (4, 5) or (fr.d == 4 and t not in SUBWEBS4):
        raise UnsupportedTriple(f"subweb {list(t)} is not enumerated for d = {fr.d}")
    table = fr.jets().symbol_table(2, 0)
    return Weighted(eval_formula(PRINTED_SUBWEB_FORMULAS[t], table), 2)


def subweb_curvature_structural(fr: WebFrame, triple: Sequence[int]) -> Weighted:
    """Subweb curvature from the structure equations, any triple and any d."""
    return Weighted(subweb_density(fr, triple).value / wedge_factor(fr, triple), 2)


def subwebs(d: int) -> list[tuple[int, int, int]]:
    return list(combinations(range(1, d + 1), 3))


def curvature_L(fr: WebFrame) -> Weighted:
    """``C(d,3) L = sum_t w_t K_t`` over the enumerated subwebs, d = 4, 5."""
    if fr.d == 4:
        ts = SUBWEBS4
    elif fr.d == 5:
        ts = SUBWEBS5
    else:
        raise UnsupportedD(f"L is tabulated for d = 4, 5 (got {fr.d})")
    table = fr.jets().symbol_table(2, 0)
    acc = ZERO
    for t in ts:
        acc = acc + eval_formula(WEDGE_FACTORS[t], table) * eval_formula(SUBWEB_FORMULAS[t], table)
    return Weighted(acc / len(ts), 2)


def curvature_L_structural(fr: WebFrame) -> Weighted:
    """Mean of the subweb curvature densities; defined for every d >= 3."""
    ts = subwebs(fr.d)
    acc = ZERO
    for t in ts:
        acc = acc + subweb_density(fr, t).value
    return Weighted(acc / len(ts), 2)


def curvature_L_printed(fr: WebFrame) -> Weighted:
    """The weighted sum exactly as printed, including the [2,4,5] weight."""
    if fr.d == 4:
        ts = SUBWEBS4
    elif fr.d == 5:
        ts = SUBWEBS5
    else:
        raise UnsupportedD(f"L is tabulated for d = 4, 5 (got {fr.d})")
    table = fr.jets().symbol_table(2, 0)
    acc = ZERO
    for t in ts:
        w = PRINTED_WEDGE_245 if t == (2, 4, 5) else WEDGE_FACTORS[t]
        acc = acc + eval_formula(w, table) * eval_formula(PRINTED_SUBWEB_FORMULAS[t], table)
    return Weighted(acc / len(ts), 2)


def curvature_form_from_integrals(
    fr: WebFrame, F1: RatFunc, F2: RatFunc, F3: RatFunc
) -> RatFunc:
    """``d gamma / (omega_1 ^ omega_2)`` of the 3-web ``(F1, F2, F3)``.

    Works directly from first integrals (independent of the frame algebra):
    with ``A dF1 + B dF2 + dF3 = 0`` the forms ``A dF1`` and ``dF3`` are
    normalized and ``gamma = h dF3`` up to a closed term.
    """
    X, Y = "x", "y"
    f1x, f1y = F1.derivative(X), F1.derivative(Y)
    f2x, f2y = F2.derivative(X), F2.derivative(Y)
    f3x, f3y = F3.derivative(X), F3.derivative(Y)
    J = f1x * f2y - f1y * f2x
    A = (-f3x * f2y + f3y * f2x) / J
    h = (A.derivative(X) * f1y - A.derivative(Y) * f1x) / (A * (f1x * f3y - f1y * f3x))
    return (h.derivative(X) * f3y - h.derivative(Y) * f3x) / (fr.fx * fr.fy)


PRINTED_MPQ_FORMULAS = {
    "M": (
        "(-a_11 - 2*a*a_12 - a*a_22)/(a*(a - 1))"
        " + ((2*a - 1)*a_1^2 - 2*a^2*a_1*a_2 + a^2*a_2^2)/(a^2*(a - 1)^2)"
    ),
    "P": "(a_11 - a*a_22)/(a*(a - 1)) + ((1 - 2*a)*a_1^2 + a^2*a_2^2)/(a^2*(a - 1)^2)",
    "Q": (
        "(a_11 - 2*a_12 + a*a_22)/(a*(a - 1))"
        " + ((1 - 2*a)*a_1^2 + 2*(2*a - 1)*a_1*a_2 - a^2*a_2^2)/(a^2*(a - 1)^2)"
    ),
}

# M with the sign of its a*a_12 term corrected to agree with the alternating sum.
MPQ_FORMULAS = {
    **PRINTED_MPQ_FORMULAS,
    "M": (
        "(-a_11 + 2*a*a_12 - a*a_22)/(a*(a - 1))"
        " + ((2*a - 1)*a_1^2 - 2*a^2*a_1*a_2 + a^2*a_2^2)/(a^2*(a - 1)^2)"
    ),
}

MPQ_SIGNS = {"M": (1, -1, -1, 1), "P": (1, 1, -1, -1), "Q": (1, -1, 1, -1)}


def mpq_alternating(fr: WebFrame) -> dict[str, Weighted]:
    if fr.d != 4:
        raise UnsupportedD("M, P, Q are defined for d = 4")
    table = fr.jets().symbol_table(2, 0)
    terms = [
        eval_formula(WEDGE_FACTORS[t], table) * eval_formula(SUBWEB_FORMULAS[t], table)
        for t in SUBWEBS4
    ]
    out = {}
    for name, signs in MPQ_SIGNS.items():
        acc = RatFunc.const(0)
        for s, v in zip(signs, terms):
            acc = acc + v if s > 0 else acc - v
        out[name] = Weighted(acc, 2)
    return out


def mpq(fr: WebFrame, *, printed: bool = False) -> dict[str, Weighted]:
    """Closed forms of M, P, Q in terms of a and its derivatives."""
    if fr.d != 4:
        raise UnsupportedD("M, P, Q are defined for d = 4")
    table = fr.jets().symbol_table(2, 0)
    forms = PRINTED_MPQ_FORMULAS if printed else MPQ_FORMULAS
    return {n: Weighted(eval_formula(t, table), 2) for n, t in forms.items()}
