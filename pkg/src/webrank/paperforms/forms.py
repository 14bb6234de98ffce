"""Closed-form invariant expressions evaluated over symbol tables.

Every formula is stored as text over abstract jet names (``a_12``, ``K_2``,
``c_1_2`` ...) and evaluated with :func:`webrank.symbolic.eval_formula`, so
the same transcription serves concrete webs (a table built from a frame)
and identity checks (a table of free symbols from
:mod:`webrank.paperforms.abstract`).

Where a printed expression is known to be wrong, the printed text is kept
next to the working one (``PRINTED_*``) so tests can pin the discrepancy.
"""

from __future__ import annotations

from typing import Mapping

from ..ratfield import RatFunc
from ..symbolic import DenominatorVanishes, MissingSymbol, eval_formula
from ..webcalc import UnsupportedD, Weighted, WebFrame

__all__ = [
    "NotApplicable",
    "SymbolTable",
    "symbol_table",
    "add_coefficients",
    "add_rank2_data",
    "c012_thm7",
    "maxrank4_forms",
    "maxrank4_relations",
    "rank2_G",
    "rank1_J",
    "rank2_G_compatibility",
    "const_invariant_forms",
    "constant_a_identities",
    "a1_zero_identities",
    "c5_c0",
    "PRINTED_EXAMPLES",
    "printed_example_check",
    "THM7",
    "MAXRANK4",
    "RELATIONS4",
    "PRINTED_RELATIONS4",
    "RANK2_G",
    "RANK1_J",
    "PRINTED_RANK1_J",
    "R_AB",
    "C0_D5",
    "MissingSymbol",
    "DenominatorVanishes",
]

SymbolTable = dict[str, RatFunc]


class NotApplicable(ValueError):
    """A precondition of a closed form fails (e.g. ``c_0`` vanishes)."""

    def __init__(self, condition: str, detail: str = ""):
        super().__init__(f"{condition}{': ' + detail if detail else ''}")
        self.condition = condition


# 4-webs: coefficients of the obstruction -----------------------------------

THM7 = {
    "c_0": "K + (a_11 - a*a_22 - 2*(1 - a)*a_12)/(4*a*(1 - a))"
    " + ((-1 + 2*a)*a_1^2 - a^2*a_2^2 + 2*(1 - a)^2*a_1*a_2)/(4*(1 - a)^2*a^2)",
    "c_1": "(K_2 - K_1)/(4*(1 - a))"
    " + ((a - 4)*a_1 + (11 - 20*a + 12*a^2)*a_2)/(12*(1 - a)^2*a)*K"
    " + (a_112 - a_122)/(4*a*(1 - a))"
    " + (a_1 - a*a_2)/(4*a^2*(1 - a))*a_22"
    " + (2*a - 1)*(a_1 - a*a_2)/(4*(1 - a)^2*a^2)*a_12"
    " - a_2^2*((1 - 2*a)*a_1 + a*a_2)/(4*(1 - a)^2*a^2)",
    "c_2": "(a*K_2 - K_1)/(4*a*(1 - a))"
    " + ((1 - 2*a)*a_1 - (a - 2)*a*a_2)/(4*(1 - a)^2*a^2)*K",
}

# right-hand sides of K, K_3 = delta_3 K, K_4 = delta_4 K at maximum rank
MAXRANK4 = {
    "K": "(-a_11 + a*a_22 + 2*(1 - a)*a_12)/(4*a*(1 - a))"
    " + ((1 - 2*a)*a_1^2 + a^2*a_2^2 - 2*(1 - a)^2*a_1*a_2)/(4*(1 - a)^2*a^2)",
    "K_3": "((4 - a)*a_1 - (11 - 20*a + 12*a^2)*a_2)/(3*(1 - a)*a)*K"
    " + (a_122 - a_112)/a + a_4*a_22/a^2"
    " + (2*a - 1)*a_4*a_12/((1 - a)*a^2)"
    " + (2*a_2^2*(1 - a)*a_1 + a_2^2*a_4)/((1 - a)*a^2)",
    "K_4": "(a*a_4 - (1 - a)*a_1 - 2*a*a_3)/((1 - a)*a)*K",
}

_R1_TAIL = (
    " - 2*((13*a^2 + 18*a - 19)*a_1 + 3*a*(3 - 5*a)*a_2)*a_12"
    " + a*((19*a - 17)*a_1 + 15*a*a_2)*a_22)"
    " + (-34*a^2 + 49*a - 19)*a_1^3 + (26*a^3 + 40*a^2 - 89*a + 38)*a_1^2*a_2"
    " + a*(-31*a^2 + 53*a - 18)*a_1*a_2^2 - 15*a^3*a_2^3"
)
_R1_HEAD = "6*(a - 1)^2*a^2*(-a_111 + 2*(a + 1)*a_112 - 3*a*a_122) + a*(a - 1)*("

RELATIONS4 = {
    "R1": _R1_HEAD + "(5*(7*a - 5)*a_1 - 3*(4*a^2 + 5*a - 4)*a_2)*a_11" + _R1_TAIL,
    "R2": "6*(a - 1)^2*a^2*(3*a_112 - 2*(a + 1)*a_122 + a*a_222)"
    " + a*(a - 1)*((-15*a_1 + (17 - 19*a)*a_2)*a_11"
    " + 2*(3*(7 - 9*a)*a_1 + (5*a^2 + 18*a - 11)*a_2)*a_12"
    " + (3*(4*a^2 + 5*a - 4)*a_1 + a*(1 - 11*a)*a_2)*a_22)"
    " + 15*(2*a - 1)*a_1^3 + (56*a^2 - 101*a + 41)*a_1^2*a_2"
    " + (-10*a^3 - 41*a^2 + 58*a - 22)*a_1*a_2^2 + a^2*(5*a - 1)*a_2^3",
}

# printed with an extra factor a in front of the a_11 group
PRINTED_RELATIONS4 = {
    "R1": _R1_HEAD + "a*(5*(7*a - 5)*a_1 - 3*(4*a^2 + 5*a - 4)*a_2)*a_11" + _R1_TAIL,
    "R2": RELATIONS4["R2"],
}

RANK2_G = {
    "G_11": "a*c_0*(c_2_2 - c_2_1) + a*c_2*(c_0_1 - c_0_2) - a*(1 - a)*c_1*c_2"
    " + (2*a_2 - a_1 - a*a_2)*c_0*c_2 - K*c_0^2",
    "G_12": "a*c_0*(c_1_2 - c_1_1) + a*c_1*(c_0_1 - c_0_2) - a*(1 - a)*c_1^2"
    " + (2*a_2 - a_1 - 2*a*a_2)*c_0*c_1 + (a_2^2 + a_12 - a_22)*c_0^2",
    "G_21": "c_0*(c_2_1 - a*c_2_2) + c_2*(a*c_0_2 - c_0_1) - 2*a_2*c_0*c_2 + a*(1 - a)*c_2^2",
    "G_22": "c_0*(c_1_1 - a*c_1_2) + c_1*(a*c_0_2 - c_0_1) + a*(1 - a)*c_1*c_2"
    " - a_2*c_0*c_1 - a_2*(1 - a)*c_0*c_2 + (a_22 - K)*c_0^2",
}

RANK1_J = {
    "J_1": "a_2*c_1*c_2*(c_1 - c_2) + a*c_2^2*(c_1_2 - c_1_1)"
    " + c_1*c_2*(c_1_1 + a*(c_2_1 - c_1_2 - c_2_2)) + c_1^2*(a*c_2_2 - c_2_1)",
    "J_2": "c_1^2*(c_1 - c_2)^2*K + (c_1_11 - c_1_12)*c_1*c_2*(c_2 - c_1)"
    " + c_1^2*(c_1 - c_2)*(c_2_11 - c_2_12)"
    " - c_2*(2*c_1 - c_2)*c_1_1*(c_1_2 - c_1_1)"
    " + c_1^2*c_2_1*(c_1_2 - c_2_2 + c_2_1) + c_1^2*c_1_1*(c_2_2 - 2*c_2_1)",
    "J_3": "(a_22 - a_12)*(1 - a) + a_2*(a_2 - a_1) - (1 - a)^2*K",
    "J_4": "a_12*a - a_1*a_2 - K*a^2",
    "J_10": "G_11*G_22 - G_21*G_12",
    "J_11": "c_0*(G_21_1*G_22 - G_22_1*G_21) + (a_2*c_0 - a*c_1)*G_21^2"
    " + (a*c_2 - a_2*c_0 + a*c_1)*G_21*G_22 - a*c_2*G_22^2",
    "J_12": "c_0*(G_21_2*G_22 - G_22_2*G_21) + (a_2*c_0 - a*c_1)*G_21^2"
    " + (c_1 + a*c_2)*G_21*G_22 - c_2*G_22^2",
}

PRINTED_RANK1_J = dict(RANK1_J)
PRINTED_RANK1_J["J_12"] = (
    "c_0*(G_21_2*G_22 - G_22_2*G_21) + (a_2*c_0 - a*c_1)*G_21^2"
    " + a*(c_2 - c_1)*G_21*G_22 - c_2*G_22^2"
)

# 5-webs: top coefficient
R_AB = (
    "((1 - 3*a + b)*a_11 + (4*a - 3*a^2 - 3*b + 4*a*b)*a_12 + (a^2 - 3*a*b + a^2*b)*a_22)"
    "/(10*(-1 + a)*a*(a - b))"
    " + (2*a - 6*a^2 + 6*a^3 - b + 4*a*b - 6*a^2*b - b^2 + 2*a*b^2)/(10*(-1 + a)^2*a^2*(a - b)^2)*a_1^2"
    " + (4*a^2 - 8*a^3 + 3*a^4 - 6*a*b + 14*a^2*b - 8*a^3*b + 3*b^2 - 6*a*b^2 + 4*a^2*b^2)"
    "/(10*(-1 + a)^2*a^2*(a - b)^2)*a_1*a_2"
    " + (-a^4 - 2*a^2*b + 6*a^3*b - a^4*b - 2*a^2*b^2)/(10*(-1 + a)^2*a^2*(a - b)^2)*a_2^2"
    " + (-1 + a*b)/(10*(-1 + a)*(a - b)^2*(-1 + b))*a_1*b_2"
)


def _swap_ab(text: str) -> str:
    out = []
    for ch in text:
        out.append({"a": "b", "b": "a"}.get(ch, ch))
    return "".join(out)


C0_D5 = (
    "K + (" + R_AB + ") + (" + _swap_ab(R_AB) + ")"
    " - (a - a^2 + b - b^2 - 4*a*b + 2*a^2*b + 2*a*b^2)/(10*(-1 + a)*a*(a - b)^2*(-1 + b)*b)*a_1*b_1"
    " + (2*a - a^2 + 2*b - b^2 - 4*a*b + a^2*b + a*b^2)/(10*(-1 + a)*(a - b)^2*(-1 + b))*a_2*b_2"
)


# symbol tables -------------------------------------------------------------

C_WEIGHTS = (2, 3, 3)  # c_0 = L has weight 2; u, v carry weight 1
G_WEIGHT = 6


def symbol_table(fr: WebFrame, depth: int = 3, k_depth: int | None = None) -> SymbolTable:
    """Jet names of ``a``, ``b``, ``K`` mapped to values on a frame."""
    return dict(fr.jets().symbol_table(depth, k_depth))


def add_coefficients(st: SymbolTable, fr: WebFrame, coeffs) -> SymbolTable:
    """Adds ``c_i``, ``c_i_j`` and symmetrized ``c_i_jk`` for a 4-web."""
    for i, (c, w) in enumerate(zip(coeffs, C_WEIGHTS)):
        u = Weighted(c, w)
        d1, d2 = fr.cov(1, u), fr.cov(2, u)
        st[f"c_{i}"] = c
        st[f"c_{i}_1"] = d1.value
        st[f"c_{i}_2"] = d2.value
        st[f"c_{i}_11"] = fr.cov(1, d1).value
        st[f"c_{i}_22"] = fr.cov(2, d2).value
        st[f"c_{i}_12"] = (fr.cov(2, d1).value + fr.cov(1, d2).value) / 2
    return st


def add_rank2_data(st: SymbolTable, fr: WebFrame) -> SymbolTable:
    """Adds ``G_ij`` and their first covariant derivatives ``G_ij_k``."""
    for name, g in rank2_G(st).items():
        st[name] = g
        for k in (1, 2):
            st[f"{name}_{k}"] = fr.cov(k, Weighted(g, G_WEIGHT)).value
    return st


# evaluation ----------------------------------------------------------------


def _eval(texts: Mapping[str, str], st: Mapping[str, RatFunc]) -> dict[str, RatFunc]:
    return {k: eval_formula(t, st) for k, t in texts.items()}


def _require_nonzero(st: Mapping[str, RatFunc], checks) -> None:
    for label, text in checks:
        if eval_formula(text, st).is_zero():
            raise NotApplicable(label, f"{text} vanishes identically")


_A_CHECKS = (("a != 0", "a"), ("a != 1", "1 - a"))


def c012_thm7(st: Mapping[str, RatFunc]) -> tuple[RatFunc, RatFunc, RatFunc]:
    _require_nonzero(st, _A_CHECKS)
    v = _eval(THM7, st)
    return v["c_0"], v["c_1"], v["c_2"]


def maxrank4_forms(st: Mapping[str, RatFunc]) -> tuple[RatFunc, RatFunc, RatFunc]:
    _require_nonzero(st, _A_CHECKS)
    v = _eval(MAXRANK4, st)
    return v["K"], v["K_3"], v["K_4"]


def maxrank4_relations(st: Mapping[str, RatFunc], *, printed: bool = False) -> tuple[RatFunc, RatFunc]:
    v = _eval(PRINTED_RELATIONS4 if printed else RELATIONS4, st)
    return v["R1"], v["R2"]


def rank2_G(st: Mapping[str, RatFunc]) -> dict[str, RatFunc]:
    _require_nonzero(st, (("c_0 != 0", "c_0"),))
    return _eval(RANK2_G, st)


_J_CASES = {
    "J_1": (("c_1 != 0", "c_1"), ("c_1 != c_2", "c_1 - c_2")),
    "J_2": (("c_1 != 0", "c_1"), ("c_1 != c_2", "c_1 - c_2")),
    "J_3": (),
    "J_4": (),
    "J_10": (("c_0 != 0", "c_0"),),
    "J_11": (("c_0 != 0", "c_0"),),
    "J_12": (("c_0 != 0", "c_0"),),
}


def rank1_J(st: Mapping[str, RatFunc], *, printed: bool = False, names=None) -> dict[str, RatFunc | NotApplicable]:
    """Each requested ``J`` or the :class:`NotApplicable` explaining its absence."""
    texts = PRINTED_RANK1_J if printed else RANK1_J
    out: dict[str, RatFunc | NotApplicable] = {}
    for name in names or texts:
        try:
            _require_nonzero(st, _J_CASES[name])
            out[name] = eval_formula(texts[name], st)
        except NotApplicable as exc:
            out[name] = exc
    return out


_AB_CHECKS = (
    ("a != 0", "a"),
    ("a != 1", "1 - a"),
    ("b != 0", "b"),
    ("b != 1", "1 - b"),
    ("a != b", "a - b"),
)


def c5_c0(st: Mapping[str, RatFunc]) -> RatFunc:
    _require_nonzero(st, _AB_CHECKS)
    return eval_formula(C0_D5, st)


def rank2_G_compatibility(fr: WebFrame, coeffs) -> dict[str, RatFunc]:
    """``G_ij`` recomputed from the first-order system of a rank-2 web.

    With ``c_0 != 0`` the obstruction solves for ``v_2``; together with the
    abelian equations this fixes every first derivative of ``(u, v)``.
    Commuting ``delta_1`` and ``delta_2`` on ``u`` and on ``v`` leaves two
    linear forms in ``(u, v)``; times ``c_0^2`` their coefficients are
    ``(G_11, G_12)`` and ``(G_21, G_22)``.
    """
    require_d(fr, 4)
    c0, c1, c2 = coeffs
    if c0.is_zero():
        raise NotApplicable("c_0 != 0", "c_0 vanishes identically")
    a = fr.a
    a2 = fr.cov(2, Weighted(a, 0)).value
    K = fr.K.value
    phi = (-c2 / c0, -c1 / c0)
    v1 = (a * phi[0], a * phi[1] + a2)
    first = {("u", 1): (-v1[0], -v1[1]), ("u", 2): (-v1[0], -v1[1]), ("v", 1): v1, ("v", 2): phi}

    def delta(i, form):
        # form = (cu, cv) stands for cu*u + cv*v; coefficients have weight 1
        cu, cv = form
        pu, pv = first["u", i]
        qu, qv = first["v", i]
        du = fr.cov(i, Weighted(cu, 1)).value
        dv = fr.cov(i, Weighted(cv, 1)).value
        return du + cu * pu + cv * qu, dv + cu * pv + cv * qv

    out = {}
    for row, name in ((1, "u"), (2, "v")):
        lhs = delta(2, first[name, 1])
        rhs = delta(1, first[name, 2])
        cu = lhs[0] - rhs[0] - (K if name == "u" else 0)
        cv = lhs[1] - rhs[1] - (K if name == "v" else 0)
        out[f"G_{row}1"] = cu * c0**2
        out[f"G_{row}2"] = cv * c0**2
    return out


# constant basic invariant ----------------------------------------------------

CONST_A_C = {"c_0": "K", "c_1": "(K_1 - K_2)/(4*(a - 1))", "c_2": "(K_1 - a*K_2)/(4*a*(a - 1))"}

# printed; the engine and the compatibility route disagree (see tests)
PRINTED_CONST_A_G = {
    "G_11": "(5*(K_1^2 - (a + 1)*K_1*K_2 + a*K_2^2) - 4*K*(4*K^2*(a - 1) + K_11 - 2*a*K_12 + a^2*K_22))/(16*(a - 1))",
    "G_12": "(5*(K_1 - K_2)^2 - 4*K*(K_11 - 2*K_12 + K_22))/(16*(a - 1))",
    "G_21": "(-5*(K_1 - a*K_2)^2 + 4*K*(K_11 - a*(a - 1)*K_12 + a^3*K_22))/(16*a*(a - 1))",
    "G_22": "-(5*(K_1^2 - (a + 1)*K_1*K_2 + a*K_2^2) + 4*K*(4*K^2*(a - 1) - K_11 + (1 + a)*K_12 - a*K_22))/(16*(a - 1))",
}
PRINTED_CONST_A_J10 = (
    "(1/64)*K*(64*K^5 - 5*K_2^2*K_11 + 16*a*K^3*K_22 - 5*(a + 1)*K_1^2*K_22"
    " + 4*(a + 1)*K*K_11*K_22 + 5*K_1*K_2*(K_12 + a*K_22)"
    " - K_12*(-5*K_1^2 + 4*K*(4*K^2 + K_11 + a*K_22)))"
)

# a_1 = 0: the system c_0 = c_1 = c_2 = 0 solved for K, K_1, K_2
A1_ZERO = {
    "K": "a_2^2/(4*(a - 1)^2) - a_22/(4*(a - 1))",
    "K_1": "a_2*a_22/(2*(a - 1)^2) - a_2^3/(2*(a - 1)^3)",
    "K_2": "a_2*a_22/(4*(a - 1)^2) - a_2^3/(4*(a - 1)^3)",
}
A1_ZERO_CONDITION = "a_22/(a - 1) - a_2^2/(a - 1)^2"  # delta_2(a_2/(a - 1))


def const_invariant_forms(st: Mapping[str, RatFunc]) -> dict[str, dict]:
    """Records for the constant-``a`` and ``a_1 = 0`` special cases.

    Each record says whether the case applies to the table and, if so,
    compares the special forms with the general ones evaluated on it.
    """
    zero = lambda n: n in st and st[n].is_zero()
    out: dict[str, dict] = {}
    a_const = all(zero(n) for n in ("a_1", "a_2"))
    rec: dict = {"applies": a_const}
    if a_const:
        _require_nonzero(st, _A_CHECKS)
        gen = dict(zip(("c_0", "c_1", "c_2"), c012_thm7(st)))
        rec["c"] = {k: (eval_formula(t, st) - gen[k]).is_zero() for k, t in CONST_A_C.items()}
        rec["K_zero"] = st["K"].is_zero()
    out["constant_a"] = rec
    rec = {"applies": zero("a_1")}
    if rec["applies"]:
        _require_nonzero(st, _A_CHECKS)
        rec["K_system"] = {k: (eval_formula(t, st) - st[k]).is_zero() for k, t in A1_ZERO.items()}
        rec["condition"] = eval_formula(A1_ZERO_CONDITION, st).is_zero()
    out["a1_zero"] = rec
    return out


def constant_a_identities() -> dict[str, bool]:
    """General forms with every ``a``-derivative zero, over free symbols.

    Returns, per coefficient, whether the general expression reduces to the
    constant-``a`` one, and the same for the printed ``G_ij`` and ``J_10``
    against the engine-side reduction.
    """
    from .abstract import JetAlgebra, parse_jet_var

    J = JetAlgebra()

    def kill(e: RatFunc) -> RatFunc:
        z = {}
        for v in e.variables:
            base, j, k = parse_jet_var(v, J.weights)
            if base == "a" and j + k:
                z[v] = RatFunc.const(0)
        return e.substitute(z) if z else e

    st = {k: kill(v) for k, v in J.table(3, 2).items()}
    c = [kill(x) for x in c012_thm7(st)]
    out = {k: (eval_formula(t, st) - x).is_zero() for (k, t), x in zip(CONST_A_C.items(), c)}
    for i, ci in enumerate(c):
        st[f"c_{i}"] = ci
        for j in (1, 2):
            st[f"c_{i}_{j}"] = kill(J.delta(j, ci))
    G = rank2_G(st)
    for k, t in PRINTED_CONST_A_G.items():
        out[f"printed {k}"] = (eval_formula(t, st) - G[k]).is_zero()
    j10 = G["G_11"] * G["G_22"] - G["G_21"] * G["G_12"]
    out["printed J_10"] = (eval_formula(PRINTED_CONST_A_J10, st) - j10).is_zero()
    return out


def a1_zero_identities() -> dict[str, bool]:
    """Solve ``c_i = 0`` for ``K, K_1, K_2`` when ``a_1 = 0``, over free symbols.

    Jets are ordered with ``delta_2`` outermost so ``a_1 = 0`` kills every
    jet carrying a ``delta_1``.
    """
    from .abstract import JetAlgebra, parse_jet_var

    J = JetAlgebra(outer=2)

    def kill(e: RatFunc) -> RatFunc:
        z = {}
        for v in e.variables:
            base, j, _ = parse_jet_var(v, J.weights)
            if base == "a" and j:
                z[v] = RatFunc.const(0)
        return e.substitute(z) if z else e

    st = {k: kill(v) for k, v in J.table(3).items()}
    c0, c1, c2 = (kill(x) for x in c012_thm7(st))
    K, K1, K2 = "K_0_0", "K_1_0", "K_0_1"
    k_sol = RatFunc.var(K) - c0 / c0.derivative(K)
    c1, c2 = c1.substitute({K: k_sol}), c2.substitute({K: k_sol})
    nil = {K1: RatFunc.const(0), K2: RatFunc.const(0)}
    m = [[c1.derivative(K1), c1.derivative(K2)], [c2.derivative(K1), c2.derivative(K2)]]
    r = [-c1.substitute(nil), -c2.substitute(nil)]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    k1 = (r[0] * m[1][1] - m[0][1] * r[1]) / det
    k2 = (m[0][0] * r[1] - m[1][0] * r[0]) / det
    solved = {"K": k_sol, "K_1": k1, "K_2": k2}
    return {k: (solved[k] - eval_formula(t, st)).is_zero() for k, t in A1_ZERO.items()}


def require_d(fr: WebFrame, d: int) -> None:
    if fr.d != d:
        raise UnsupportedD(f"needs a {d}-web, got d = {fr.d}")


# printed worked examples -----------------------------------------------------

# Values typeset for the two rank-two 4-webs, keyed by the two non-coordinate
# foliations.  Names follow the symbol table (``c_0_1`` is delta_1 c_0).
PRINTED_EXAMPLES: dict[tuple[str, str], dict[str, str]] = {
    ("x + y", "x^2 + y^2"): {
        "c_0": "-3*(x - y)^3*(x + y)/(x*y^5)",
        "c_1": "(x^2 - y^2)/(4*x^2*y^3)",
        "c_2": "0",
        "c_0_1": "-1/(2*x^3)",
        "c_0_2": "1/(2*y^3)",
        "c_1_1": "-1/(2*x^3*y)",
        "c_1_2": "(3*x^2 - y^2)/(4*x^2*y^4)",
        "c_2_1": "0",
        "c_2_2": "0",
    },
    ("x/y", "x*y*(x + y)"): {
        "c_0": "3*y^3*(x^2 - y^2)/(2*x*(2*x + y)^2*(x + 2*y)^2)",
        "c_1": "3*y^5*(y - x)/(2*x*(2*x + y)^2*(x + 2*y)^2)",
        "c_2": "0",
        "c_0_1": "3*y^4*(2*x^4 - 5*x^3*y - 12*x^2*y^2 - 5*x*y^3 + 2*y^4)/(2*x*(2*x + y)^2*(x + 2*y)^2)",
        "c_0_2": "3*y^4*(2*x^4 - 5*x^3*y - 12*x^2*y^2 - 5*x*y^3 + 2*y^4)/(2*x*(2*x + y)^2*(x + 2*y)^2)",
        "c_1_1": "-3*y^6*(4*x^3 - 10*x^2*y - 7*x*y^2 + 4*y^3)/(2*x^2*(2*x + y)^3*(x + 2*y)^4)",
        "c_1_2": "-3*y^6*(4*x^3 - 10*x^2*y - 7*x*y^2 + 4*y^3)/(2*x^2*(2*x + y)^3*(x + 2*y)^4)",
        "c_2_1": "0",
        "c_2_2": "0",
    },
}


def printed_example(fr: WebFrame) -> dict[str, str] | None:
    from ..expr import parse_ratfunc

    require_d(fr, 4)
    fols = tuple(fr.web.foliations[2:])
    for key, table in PRINTED_EXAMPLES.items():
        if tuple(parse_ratfunc(t) for t in key) == fols:
            return table
    return None


def printed_example_check(fr: WebFrame, coeffs) -> dict | None:
    """Typeset example values against the engine, with the ratio when they differ.

    ``uniform_ratio`` is the common constant ratio of every nonzero typeset
    value to the engine value, or None when no such constant exists.
    """
    from ..expr import parse_ratfunc

    table = printed_example(fr)
    if table is None:
        return None
    st = symbol_table(fr, 2, 0)
    add_coefficients(st, fr, coeffs)
    rows = {}
    ratios = set()
    for name, text in table.items():
        printed, engine = parse_ratfunc(text), st[name]
        ratio = None
        if not engine.is_zero() and not printed.is_zero():
            r = printed / engine
            ratio = r.render()
            ratios.add(r)
        rows[name] = {
            "printed": printed.render(),
            "engine": engine.render(),
            "match": printed == engine,
            "ratio": ratio,
        }
    const = [r for r in ratios if not r.variables]
    uniform = const[0].render() if len(ratios) == 1 and const else None
    return {"values": rows, "all_match": all(r["match"] for r in rows.values()), "uniform_ratio": uniform}
