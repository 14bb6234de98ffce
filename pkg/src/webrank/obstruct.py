"""Compatibility obstruction of the abelian system.

Unknowns ``u_1 .. u_n`` (``n = d - 2``, weight 1) satisfy

    Delta_i u_i = 0,  Delta_i = delta_1 - delta_2 o a_i   (a_1 = 1)
    sum_i delta_1 u_i = 0

and the single compatibility form ``kappa`` is computed twice:

* ``kappa_prolongation`` prolongs the sum relation, rewrites every jet
  through the ``Delta`` relations and eliminates order by order;
* ``kappa_multibracket`` applies the bracket operators to the unknowns and
  reduces the result with the same relations.

Operators are kept normal ordered as ``sum c_jk delta_1^j delta_2^k`` with
``delta_1`` outermost.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Callable, Mapping, Sequence

from .ratfield import RatFunc
from .webcalc import UnsupportedD, WebFrame, Weighted

__all__ = [
    "ObstructionError",
    "WeightMismatch",
    "EliminationSingular",
    "TowerMismatch",
    "DiffOp",
    "OpAlgebra",
    "JetLinForm",
    "AbelianSystem",
    "ndet",
    "multibracket",
    "box_operators",
    "kappa_prolongation",
    "kappa_multibracket",
    "free_coordinates",
    "normalizer",
    "KappaResult",
    "coordinate_name",
]

ZERO = RatFunc.const(0)
ONE = RatFunc.const(1)


class ObstructionError(ArithmeticError):
    pass


class WeightMismatch(ObstructionError):
    pass


class EliminationSingular(ObstructionError):
    pass


class TowerMismatch(ObstructionError):
    pass


@dataclass(frozen=True)
class DiffOp:
    """``sum c_jk delta_1^j delta_2^k`` on operands of weight ``w``.

    Homogeneous: the coefficient of ``(j, k)`` has weight ``shift - j - k``.
    """

    w: int
    shift: int
    terms: Mapping[tuple[int, int], RatFunc] = field(default_factory=dict)

    @property
    def order(self) -> int:
        return max((j + k for j, k in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "DiffOp") -> "DiffOp":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if (self.w, self.shift) != (other.w, other.shift):
            raise WeightMismatch(
                f"adding operators {self.w}->{self.w + self.shift} and {other.w}->{other.w + other.shift}"
            )
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return DiffOp(self.w, self.shift, out)

    def __neg__(self) -> "DiffOp":
        return DiffOp(self.w, self.shift, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def scale(self, c: RatFunc, weight: int = 0) -> "DiffOp":
        if c.is_zero():
            return DiffOp(self.w, self.shift + weight, {})
        return DiffOp(self.w, self.shift + weight, {k: c * v for k, v in self.terms.items()})


class OpAlgebra:
    """Normal-ordered operator calculus over one web frame."""

    def __init__(self, fr: WebFrame):
        self.frame = fr
        self.K = fr.K.value
        self._d2_memo: dict[tuple[int, int, int], DiffOp] = {}
        self._cov_memo: dict[tuple[int, int, RatFunc], RatFunc] = {}

    # elementary operators -------------------------------------------------

    def identity(self, w: int) -> DiffOp:
        return DiffOp(w, 0, {(0, 0): ONE})

    def zero(self, w: int, shift: int) -> DiffOp:
        return DiffOp(w, shift, {})

    def mult(self, c: RatFunc, w: int, weight: int) -> DiffOp:
        return DiffOp(w, weight, {} if c.is_zero() else {(0, 0): c})

    def delta(self, i: int, w: int) -> DiffOp:
        return DiffOp(w, 1, {(1, 0) if i == 1 else (0, 1): ONE})

    def Delta(self, a: RatFunc, w: int) -> DiffOp:
        """``delta_1 - delta_2 o a`` on weight ``w``."""
        a2 = self.cov(2, a, 0)
        terms = {(1, 0): ONE}
        terms[(0, 1)] = -a
        if not a2.is_zero():
            terms[(0, 0)] = -a2
        return DiffOp(w, 1, terms)

    # calculus -------------------------------------------------------------

    def cov(self, i: int, c: RatFunc, weight: int) -> RatFunc:
        key = (i, weight, c)
        hit = self._cov_memo.get(key)
        if hit is None:
            hit = self.frame.cov(i, Weighted(c, weight)).value
            self._cov_memo[key] = hit
        return hit

    def left_delta(self, i: int, D: DiffOp) -> DiffOp:
        """Normal form of ``delta_i o D``."""
        out = DiffOp(D.w, D.shift + 1, {})
        for (j, k), c in D.terms.items():
            wc = D.shift - j - k
            dc = self.cov(i, c, wc)
            if not dc.is_zero():
                out = out + DiffOp(D.w, D.shift + 1, {(j, k): dc})
            if i == 1:
                out = out + DiffOp(D.w, D.shift + 1, {(j + 1, k): c})
            else:
                out = out + self._d2_past(j, k, D.w).scale(c, wc)
        return out

    def _d2_past(self, j: int, k: int, w: int) -> DiffOp:
        """Normal form of ``delta_2 delta_1^j delta_2^k`` on weight ``w``."""
        key = (j, k, w)
        hit = self._d2_memo.get(key)
        if hit is not None:
            return hit
        if j == 0:
            hit = DiffOp(w, k + 1, {(0, k + 1): ONE})
        else:
            # delta_2 delta_1 V = delta_1 delta_2 V + wt(V) K V
            inner = self._d2_past(j - 1, k, w)
            hit = self.left_delta(1, inner)
            wv = w + k + j - 1
            if wv:
                hit = hit + DiffOp(w, j + k + 1, {(j - 1, k): wv * self.K})
        self._d2_memo[key] = hit
        return hit

    def compose(self, A: DiffOp, B: DiffOp) -> DiffOp:
        """Normal form of ``A o B``."""
        if A.w != B.w + B.shift:
            raise WeightMismatch(f"A acts on weight {A.w}, B produces weight {B.w + B.shift}")
        out = DiffOp(B.w, B.shift + A.shift, {})
        if not A.terms:
            return out
        kmax = max(k for _, k in A.terms)
        pow2 = [B]
        for _ in range(kmax):
            pow2.append(self.left_delta(2, pow2[-1]))
        for (j, k), c in sorted(A.terms.items()):
            X = pow2[k]
            for _ in range(j):
                X = self.left_delta(1, X)
            out = out + X.scale(c, A.shift - j - k)
        return out

    def compose_all(self, ops: Sequence[Callable[[int], DiffOp]], w: int) -> DiffOp:
        """``ops[0] o ops[1] o ... o ops[-1]`` with the last acting on weight ``w``."""
        acc = ops[-1](w)
        for f in reversed(ops[:-1]):
            acc = self.compose(f(acc.w + acc.shift), acc)
        return acc

    def apply(self, D: DiffOp, u: Weighted) -> Weighted:
        """Evaluate ``D`` on a concrete weighted function (used in tests)."""
        if u.weight != D.w:
            raise WeightMismatch(f"operator on weight {D.w} applied to weight {u.weight}")
        out = ZERO
        for (j, k), c in D.terms.items():
            v = u
            for _ in range(k):
                v = self.frame.cov(2, v)
            for _ in range(j):
                v = self.frame.cov(1, v)
            out = out + c * v.value
        return Weighted(out, D.w + D.shift)


# noncommutative determinant and brackets ------------------------------------

Entry = Callable[[int], DiffOp]


def ndet(alg: OpAlgebra, m: Sequence[Sequence[Entry]], w: int) -> DiffOp:
    """First-column expansion; each entry left-multiplies its cofactor.

    Entries are weight-polymorphic: ``entry(w)`` gives the operator acting on
    weight ``w``.  The result acts on weight ``w``.
    """
    size = len(m)
    if any(len(r) != size for r in m):
        raise ValueError("ndet needs a square matrix")
    if size == 1:
        return m[0][0](w)
    acc: DiffOp | None = None
    for r in range(size):
        minor = [row[1:] for q, row in enumerate(m) if q != r]
        cof = ndet(alg, minor, w)
        entry = m[r][0](cof.w + cof.shift)
        if entry.is_zero():
            continue
        term = alg.compose(entry, cof)
        if r % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        return DiffOp(w, size, {})
    return acc


@dataclass
class AbelianSystem:
    """Rows ``Delta_i`` on the diagonal followed by a row of ``delta_1``."""

    alg: OpAlgebra
    basic: tuple[RatFunc, ...]

    @property
    def n(self) -> int:
        return len(self.basic)

    def entry(self, r: int, c: int) -> Entry:
        alg = self.alg
        if r == self.n:
            return lambda w: alg.delta(1, w)
        if r == c:
            a = self.basic[r]
            return lambda w: alg.Delta(a, w)
        return lambda w: alg.zero(w, 1)

    def matrix(self) -> list[list[Entry]]:
        return [[self.entry(r, c) for c in range(self.n)] for r in range(self.n + 1)]


def multibracket(sys: AbelianSystem, w: int = 1) -> list[DiffOp]:
    """Components of ``sum_i (-1)^(i-1) Ndet(A_i) a_i`` on unknowns of weight ``w``."""
    m = sys.matrix()
    n = sys.n
    comps: list[DiffOp | None] = [None] * n
    for i in range(n + 1):
        rows = [row for q, row in enumerate(m) if q != i]
        for j in range(n):
            a_ij = m[i][j](w)
            if a_ij.is_zero():
                continue
            cof = ndet(sys.alg, rows, a_ij.w + a_ij.shift)
            term = sys.alg.compose(cof, a_ij)
            if i % 2:
                term = -term
            comps[j] = term if comps[j] is None else comps[j] + term
    return [c if c is not None else DiffOp(w, n + 1, {}) for c in comps]


def box_operators(sys: AbelianSystem, w: int = 1) -> list[DiffOp]:
    """``Box_i = D_1..D_n d_1 - D_1..D_{i-1} d_1 D_{i+1}..D_n D_i``."""
    alg = sys.alg
    n = sys.n
    Ds = [sys.entry(r, r) for r in range(n)]
    d1 = lambda v: alg.delta(1, v)  # noqa: E731
    lead = alg.compose_all(Ds + [d1], w)
    out = []
    for i in range(n):
        seq = Ds[:i] + [d1] + Ds[i + 1 :] + [Ds[i]]
        out.append(lead - alg.compose_all(seq, w))
    return out


# jet linear forms -------------------------------------------------------------

Jet = tuple[int, int, int]  # (unknown index from 0, j, k) meaning delta_1^j delta_2^k u_i


@dataclass(frozen=True)
class JetLinForm:
    """``sum coeff * delta_1^j delta_2^k u_i`` keyed by ``(i, j, k)``."""

    coeffs: Mapping[Jet, RatFunc]

    def __add__(self, other: "JetLinForm") -> "JetLinForm":
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return JetLinForm(out)

    def scale(self, c: RatFunc) -> "JetLinForm":
        if c.is_zero():
            return JetLinForm({})
        return JetLinForm({k: c * v for k, v in self.coeffs.items()})

    def __sub__(self, other: "JetLinForm") -> "JetLinForm":
        return self + other.scale(RatFunc.const(-1))

    def __getitem__(self, key: Jet) -> RatFunc:
        return self.coeffs.get(key, ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_order(self) -> int:
        return max((j + k for _, j, k in self.coeffs), default=-1)


def coordinate_name(d: int, jet: Jet) -> str:
    i, j, k = jet
    if d == 3:
        base = "u"
    elif d == 4:
        base = "uv"[i]
    elif d == 5:
        base = "wuv"[i]
    else:
        base = f"u{i + 1}"
    idx = "1" * j + "2" * k
    return base if not idx else f"{base}_{idx}"


def free_coordinates(d: int) -> list[Jet]:
    """Surviving coordinates in the printed coefficient order."""
    if d == 3:
        return [(0, 0, 0)]
    if d == 4:
        return [(1, 0, 1), (1, 0, 0), (0, 0, 0)]
    if d == 5:
        return [(0, 0, 2), (0, 0, 1), (2, 0, 1), (0, 0, 0), (1, 0, 0), (2, 0, 0)]
    n = d - 2
    out = []
    for m in range(n - 1, -1, -1):
        out.extend((i, 0, m) for i in range(n - m))
    return out


def _free_at_order(d: int, m: int) -> list[int]:
    return [i for (i, j, k) in free_coordinates(d) if j == 0 and k == m]


def _solve(rows: list[dict], unknowns: list, what: str) -> dict:
    """Gauss-Jordan over RatFunc; returns unknown -> linear form in the rest.

    Each row is ``{var: coeff}`` meaning ``sum coeff * var = 0``.
    """
    rows = [dict(r) for r in rows]
    pivots = {}
    for u in unknowns:
        piv = next((r for r in rows if u in r and not r[u].is_zero()), None)
        if piv is None:
            raise EliminationSingular(f"no pivot for {what} coordinate {u}")
        rows.remove(piv)
        inv = piv[u].inverse()
        norm = {v: c * inv for v, c in piv.items() if v != u}
        new_rows = []
        for r in rows:
            f = r.get(u)
            if f is None:
                new_rows.append(r)
                continue
            r = dict(r)
            del r[u]
            for v, c in norm.items():
                s = r.get(v)
                s = -f * c if s is None else s - f * c
                if s.is_zero():
                    r.pop(v, None)
                else:
                    r[v] = s
            new_rows.append(r)
        rows = new_rows
        for p, form in list(pivots.items()):
            f = form.get(u)
            if f is None:
                continue
            form = dict(form)
            del form[u]
            for v, c in norm.items():
                s = form.get(v)
                s = -f * c if s is None else s - f * c
                if s.is_zero():
                    form.pop(v, None)
                else:
                    form[v] = s
            pivots[p] = form
        pivots[u] = norm
    # u = -sum(norm)
    return {u: {v: -c for v, c in form.items()} for u, form in pivots.items()}, rows


class _Reducer:
    """Rewrites jets of the unknowns modulo the abelian relations."""

    def __init__(self, fr: WebFrame, d: int | None = None):
        self.frame = fr
        self.d = fr.d if d is None else d
        self.n = self.d - 2
        self.alg = OpAlgebra(fr)
        self.basic = fr.basic[: self.n]
        self._R: dict[Jet, dict[Jet, RatFunc]] = {}
        self._L: dict[int, DiffOp] = {}
        self._A: dict[tuple[int, int], DiffOp] = {}
        self.subs: dict[Jet, dict[Jet, RatFunc]] = {}
        self.tower: list[tuple[int, int]] = []

    # R-reduction ----------------------------------------------------------

    def L(self, k: int) -> DiffOp:
        """``normal(delta_2^k o delta_1) - delta_1 delta_2^k`` on weight 1."""
        hit = self._L.get(k)
        if hit is None:
            alg = self.alg
            op = alg.delta(1, 1)
            for _ in range(k):
                op = alg.left_delta(2, op)
            terms = dict(op.terms)
            c = terms.pop((1, k))
            assert c == 1
            assert all(j == 0 for j, _ in terms)
            hit = DiffOp(op.w, op.shift, terms)
            self._L[k] = hit
        return hit

    def A_pow(self, i: int, k: int) -> DiffOp:
        """``delta_2^k o (a_i delta_2 + (a_i)_2)`` on weight 1."""
        key = (i, k)
        hit = self._A.get(key)
        if hit is None:
            alg = self.alg
            if k == 0:
                a = self.basic[i]
                a2 = alg.cov(2, a, 0)
                terms = {(0, 1): a}
                if not a2.is_zero():
                    terms[(0, 0)] = a2
                hit = DiffOp(1, 1, terms)
            else:
                hit = alg.left_delta(2, self.A_pow(i, k - 1))
            self._A[key] = hit
        return hit

    def reduce_jet(self, jet: Jet) -> dict[Jet, RatFunc]:
        """Express ``delta_1^j delta_2^k u_i`` through pure ``delta_2`` jets."""
        i, j, k = jet
        if j == 0:
            return {jet: ONE}
        hit = self._R.get(jet)
        if hit is not None:
            return hit
        # delta_1 delta_2^k u = delta_2^k A u - L_k u
        first = self.A_pow(i, k) - self.L(k)
        if j == 1:
            out: dict[Jet, RatFunc] = {}
            for (jj, kk), c in first.terms.items():
                _acc(out, (i, 0, kk), c)
            self._R[jet] = out
            return out
        op = first
        for _ in range(j - 1):
            op = self.alg.left_delta(1, op)
        out = {}
        for (jj, kk), c in op.terms.items():
            for key, v in self.reduce_jet((i, jj, kk)).items():
                _acc(out, key, c * v)
        self._R[jet] = out
        return out

    def reduce_op(self, i: int, D: DiffOp) -> dict[Jet, RatFunc]:
        """``D u_i`` rewritten in pure ``delta_2`` jets."""
        out: dict[Jet, RatFunc] = {}
        for (j, k), c in D.terms.items():
            for key, v in self.reduce_jet((i, j, k)).items():
                _acc(out, key, c * v)
        return out

    # prolongation of the sum relation ---------------------------------------

    def sum_prolongation(self, j: int, k: int) -> dict[Jet, RatFunc]:
        """``delta_1^j delta_2^k (sum_i delta_1 u_i)`` in pure jets."""
        alg = self.alg
        op = alg.delta(1, 1)
        for _ in range(k):
            op = alg.left_delta(2, op)
        for _ in range(j):
            op = alg.left_delta(1, op)
        out: dict[Jet, RatFunc] = {}
        for i in range(self.n):
            for key, v in self.reduce_op(i, op).items():
                _acc(out, key, v)
        return out

    # elimination tower ---------------------------------------------------------

    def substitute(self, form: Mapping[Jet, RatFunc]) -> dict[Jet, RatFunc]:
        out: dict[Jet, RatFunc] = {}
        for key, c in form.items():
            sub = self.subs.get(key)
            if sub is None:
                _acc(out, key, c)
            else:
                for k2, v in sub.items():
                    _acc(out, k2, c * v)
        return out

    def build_tower(self) -> None:
        n = self.n
        for m in range(1, n + 1):
            eqs = [self.substitute(self.sum_prolongation(j, m - 1 - j)) for j in range(m)]
            free = _free_at_order(self.d, m) if m < n else []
            top = [(i, 0, m) for i in range(n)]
            elim = [t for t in top if t[0] not in free]
            if len(elim) != m:
                raise TowerMismatch(f"order {m}: expected {m} eliminated coordinates, got {len(elim)}")
            sol, rest = _solve(eqs, elim, f"order-{m}")
            if any(rest):
                raise TowerMismatch(f"order {m}: unexpected leftover relations")
            for u, form in sol.items():
                self.subs[u] = form
            self.tower.append((m, n - m))

    def reduce_to_free(self, form: Mapping[Jet, RatFunc]) -> dict[Jet, RatFunc]:
        out = self.substitute(form)
        allowed = set(free_coordinates(self.d))
        bad = [k for k in out if k not in allowed]
        if bad:
            raise TowerMismatch(f"coordinates {bad} survived reduction")
        return out


def _acc(d: dict, key, c: RatFunc) -> None:
    s = d.get(key)
    s = c if s is None else s + c
    if s.is_zero():
        d.pop(key, None)
    else:
        d[key] = s


def _check_d(fr: WebFrame, allow_large: bool) -> None:
    if fr.d < 3:
        raise UnsupportedD("need d >= 3")
    if fr.d > 5 and not allow_large:
        raise UnsupportedD(f"d = {fr.d} needs the override flag")


@dataclass
class KappaResult:
    d: int
    raw: JetLinForm
    normalizer: RatFunc
    tower: list[tuple[int, int]]

    @cached_property
    def form(self) -> JetLinForm:
        """The obstruction scaled so that its top coefficient is L (K for d = 3)."""
        inv = self.normalizer.inverse()
        return JetLinForm({k: v * inv for k, v in self.raw.coeffs.items()})

    @property
    def coefficients(self) -> list[RatFunc]:
        return [self.form[c] for c in free_coordinates(self.d)]


def normalizer(fr: WebFrame) -> RatFunc:
    """Ratio of the unit-multiplier obstruction to the normalized one.

    Found by comparing the top coefficient with the mean subweb curvature on
    generic webs for d = 3..6 (see tests).  For d >= 5 the top coordinate is a
    jet of ``u_1`` and the ratio is ``(-1)^d C(d,3) prod_{i>=2} (a_i - 1)``;
    for d = 4 the top coordinate ``v_2`` trades ``u_2 = -a v_2 - a_2 v``,
    contributing an extra ``-a``.
    """
    d = fr.d
    if d == 3:
        return RatFunc.const(-1)
    if d == 4:
        a = fr.basic[1]
        return RatFunc.const(-4) * a * (a - 1)
    out = RatFunc.const((-1) ** d * comb(d, 3))
    for a in fr.basic[1:]:
        out = out * (a - 1)
    return out


def kappa_prolongation(fr: WebFrame, *, allow_large: bool = False) -> KappaResult:
    _check_d(fr, allow_large)
    red = _Reducer(fr)
    red.build_tower()
    n = red.n
    # order n + 1: the top coordinates cancel in a unique combination
    eqs = [red.substitute(red.sum_prolongation(j, n - j)) for j in range(n + 1)]
    top = [(i, 0, n + 1) for i in range(n)]
    lam = _left_null(eqs, top)
    combo: dict[Jet, RatFunc] = {}
    for l, e in zip(lam, eqs):
        if l.is_zero():
            continue
        for key, v in e.items():
            _acc(combo, key, l * v)
    if any(key in combo for key in top):
        raise TowerMismatch("top-order coordinates did not cancel")
    raw = red.reduce_to_free(combo)
    return KappaResult(fr.d, JetLinForm(raw), normalizer(fr), red.tower)


def _left_null(eqs: list[dict], top: list[Jet]) -> list[RatFunc]:
    """Multipliers, last one fixed to 1, killing the ``top`` coordinates."""
    n = len(top)
    # columns: sum_r lam_r eqs[r][t] = 0 for every t, with lam_n = 1
    rows = []
    for t in top:
        row = {("lam", r): eqs[r].get(t, ZERO) for r in range(n) if not eqs[r].get(t, ZERO).is_zero()}
        c = eqs[n].get(t, ZERO)
        if not c.is_zero():
            row[("one",)] = c
        rows.append(row)
    sol, rest = _solve(rows, [("lam", r) for r in range(n)], "multiplier")
    lam = []
    for r in range(n):
        form = sol[("lam", r)]
        lam.append(form.get(("one",), ZERO))
    lam.append(ONE)
    return lam


def kappa_multibracket(fr: WebFrame, *, allow_large: bool = False) -> KappaResult:
    _check_d(fr, allow_large)
    red = _Reducer(fr)
    red.build_tower()
    sys = AbelianSystem(red.alg, red.basic)
    boxes = box_operators(sys)
    combo: dict[Jet, RatFunc] = {}
    for i, B in enumerate(boxes):
        for key, v in red.reduce_op(i, B).items():
            _acc(combo, key, v)
    if any(k > red.n for (_, _, k) in combo):
        raise TowerMismatch("bracket did not drop to order d - 2")
    raw = red.reduce_to_free(combo)
    return KappaResult(fr.d, JetLinForm(raw), normalizer(fr), red.tower)
