"""Exact rational functions over QQ in finitely many named variables.

Polynomials are sympy sparse ``PolyElement`` objects in a graded
lexicographic ring; a :class:`RatFunc` holds a reduced numerator and a
denominator whose leading coefficient is 1, so equal functions have equal
representations.  Rings are created on demand for each sorted variable
tuple and operands on different variable sets are lifted to the union.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Mapping, Union

from sympy import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, ring

__all__ = [
    "Poly",
    "RatFunc",
    "RatFieldError",
    "DivisionByZeroFunction",
    "UnknownVariable",
    "PoleAtPoint",
    "var",
    "const",
    "probably_zero",
]

Poly = PolyElement
Scalar = Union[int, Fraction]


class RatFieldError(ArithmeticError):
    pass


class DivisionByZeroFunction(RatFieldError, ZeroDivisionError):
    pass


class UnknownVariable(RatFieldError, KeyError):
    pass


class PoleAtPoint(RatFieldError):
    pass


def _var_key(name: str):
    # x and y first, then everything else alphabetically
    return (0, name) if name in ("x", "y") else (1, name)


def _sorted_vars(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=_var_key))


@lru_cache(maxsize=None)
def _ring(names: tuple[str, ...]):
    if not names:
        R, *_ = ring("_c", QQ, grlex)
        return R
    return ring(",".join(names), QQ, grlex)[0]


def _ring_names(R) -> tuple[str, ...]:
    names = tuple(str(s) for s in R.symbols)
    return () if names == ("_c",) else names


def _lift(p: PolyElement, names: tuple[str, ...]) -> PolyElement:
    R = _ring(names)
    if p.ring is R:
        return p
    src = _ring_names(p.ring)
    if not src:
        return R(p.LC) if p else R.zero
    idx = [names.index(n) for n in src]
    out = {}
    nv = len(names)
    for mon, c in p.terms():
        m = [0] * nv
        for k, e in zip(idx, mon):
            m[k] = e
        out[tuple(m)] = c
    return R.from_dict(out)


def _to_qq(c) -> object:
    if isinstance(c, Fraction):
        return QQ(c.numerator, c.denominator)
    return QQ(c)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class RatFunc:
    """Immutable canonical rational function."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, num: PolyElement, den: PolyElement | None = None, *, _canonical=False):
        if den is None:
            den = num.ring.one
        if den.ring is not num.ring:
            names = _sorted_vars(_ring_names(num.ring) + _ring_names(den.ring))
            num, den = _lift(num, names), _lift(den, names)
        if not den:
            raise DivisionByZeroFunction("zero denominator")
        if not _canonical:
            if not num:
                den = num.ring.one
            elif den.is_ground:
                num, den = num.quo_ground(den.LC), num.ring.one
            else:
                _, num, den = num.cofactors(den)
                lc = den.LC
                if lc != 1:
                    num, den = num.quo_ground(lc), den.quo_ground(lc)
        self._num = num
        self._den = den
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def const(cls, c: Scalar) -> "RatFunc":
        R = _ring(())
        return cls(R(_to_qq(c)), R.one, _canonical=True)

    @classmethod
    def var(cls, name: str) -> "RatFunc":
        R = _ring((name,))
        return cls(R.gens[0], R.one, _canonical=True)

    @classmethod
    def coerce(cls, v) -> "RatFunc":
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, (int, Fraction)):
            return cls.const(v)
        raise TypeError(f"cannot coerce {type(v).__name__} to RatFunc")

    # accessors ----------------------------------------------------------

    @property
    def numerator(self) -> PolyElement:
        return self._num

    @property
    def denominator(self) -> PolyElement:
        return self._den

    @property
    def variables(self) -> tuple[str, ...]:
        """Variables that actually occur."""
        names = _ring_names(self._num.ring)
        used = set()
        for p in (self._num, self._den):
            for mon in p.monoms():
                used.update(n for n, e in zip(names, mon) if e)
        return _sorted_vars(used)

    def is_zero(self) -> bool:
        return not self._num

    def is_constant(self) -> bool:
        return self._num.is_ground and self._den.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return _to_fraction(self._num.LC) if self._num else Fraction(0)

    def is_polynomial(self) -> bool:
        return self._den.is_ground

    # arithmetic ---------------------------------------------------------

    def _pair(self, other):
        other = RatFunc.coerce(other)
        if self._num.ring is other._num.ring:
            return self._num, self._den, other._num, other._den
        names = _sorted_vars(_ring_names(self._num.ring) + _ring_names(other._num.ring))
        return (
            _lift(self._num, names),
            _lift(self._den, names),
            _lift(other._num, names),
            _lift(other._den, names),
        )

    def __add__(self, other):
        try:
            a, b, c, d = self._pair(other)
        except TypeError:
            return NotImplemented
        if b == d:
            return RatFunc(a + c, b)
        return RatFunc(a * d + b * c, b * d)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self._num, self._den, _canonical=True)

    def __sub__(self, other):
        try:
            a, b, c, d = self._pair(other)
        except TypeError:
            return NotImplemented
        if b == d:
            return RatFunc(a - c, b)
        return RatFunc(a * d - b * c, b * d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatFunc(self._num.ring.zero, self._num.ring.one, _canonical=True)
            return RatFunc(self._num * _to_qq(other), self._den, _canonical=True)
        try:
            a, b, c, d = self._pair(other)
        except TypeError:
            return NotImplemented
        # cancel crosswise first: keeps the gcds small
        if not b.is_ground and not c.is_ground:
            _, c, b = c.cofactors(b)
        if not d.is_ground and not a.is_ground:
            _, a, d = a.cofactors(d)
        num, den = a * c, b * d
        if not num:
            return RatFunc(num, num.ring.one, _canonical=True)
        lc = den.LC
        if lc != 1:
            num, den = num.quo_ground(lc), den.quo_ground(lc)
        return RatFunc(num, den, _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise DivisionByZeroFunction("inverse of the zero function")
        num, den = self._den, self._num
        lc = den.LC
        return RatFunc(num.quo_ground(lc), den.quo_ground(lc), _canonical=True)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZeroFunction("division by zero constant")
            return RatFunc(self._num.quo_ground(_to_qq(other)), self._den, _canonical=True)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self._num**n, self._den**n, _canonical=True)

    # equality -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, RatFunc):
            return NotImplemented
        a, b, c, d = self._pair(other)
        return a == c and b == d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.render())
        return self._hash

    # calculus -----------------------------------------------------------

    def derivative(self, v: str) -> "RatFunc":
        names = _ring_names(self._num.ring)
        if v not in names:
            return RatFunc(self._num.ring.zero, self._num.ring.one, _canonical=True)
        g = self._num.ring.gens[names.index(v)]
        n, d = self._num, self._den
        dn, dd = n.diff(g), d.diff(g)
        if d.is_ground:
            return RatFunc(dn, d, _canonical=True)
        # d/dv (n/d) = (n' d - n d') / d^2, reduce by gcd(d, d') first
        h, d1, dd1 = d.cofactors(dd)
        return RatFunc(dn * d1 - n * dd1, d1 * d)

    def substitute(self, bindings: Mapping[str, "RatFunc | Scalar"]) -> "RatFunc":
        names = _ring_names(self._num.ring)
        binds = {k: RatFunc.coerce(v) for k, v in bindings.items() if k in names}
        if not binds:
            return self
        for k in names:
            binds.setdefault(k, RatFunc.var(k))
        target = _sorted_vars(n for r in binds.values() for n in _ring_names(r._num.ring))
        R = _ring(target)
        nums = [_lift(binds[k]._num, target) for k in names]
        dens = [_lift(binds[k]._den, target) for k in names]

        def compose(p: PolyElement):
            # p(n/d) scaled by prod d_k^{deg_k p}, which is polynomial
            if not p:
                return R.zero, R.one
            degs = [max(m[k] for m in p.monoms()) for k in range(len(names))]
            pw_n: dict = {}
            pw_d: dict = {}

            def pn(k, e):
                key = (k, e)
                if key not in pw_n:
                    pw_n[key] = nums[k] ** e
                return pw_n[key]

            def pd(k, e):
                key = (k, e)
                if key not in pw_d:
                    pw_d[key] = dens[k] ** e
                return pw_d[key]

            acc = R.zero
            for mon, c in p.terms():
                t = R(c)
                for k, e in enumerate(mon):
                    if e:
                        t = t * pn(k, e)
                    if degs[k] - e:
                        t = t * pd(k, degs[k] - e)
                acc += t
            scale = R.one
            for k, D in enumerate(degs):
                if D:
                    scale = scale * pd(k, D)
            return acc, scale

        an, asc = compose(self._num)
        bn, bsc = compose(self._den)
        if not bn:
            raise DivisionByZeroFunction("denominator vanishes after substitution")
        return RatFunc(an * bsc, bn * asc)

    def eval_at(self, point: Mapping[str, Scalar]) -> Fraction:
        names = _ring_names(self._num.ring)
        used = set(self.variables)
        vals = []
        for n in names:
            if n not in point:
                if n in used:
                    raise UnknownVariable(n)
                vals.append(_to_qq(0))  # absent from the canonical form
                continue
            vals.append(_to_qq(point[n]))
        if not names:
            return _to_fraction(self._num.LC) if self._num else Fraction(0)
        den = self._den(*vals) if len(vals) > 1 else self._den(vals[0])
        den = den if not isinstance(den, PolyElement) else den.LC
        if den == 0:
            raise PoleAtPoint(f"pole at {dict(point)}")
        num = self._num(*vals) if len(vals) > 1 else self._num(vals[0])
        num = num if not isinstance(num, PolyElement) else num.LC
        return _to_fraction(num) / _to_fraction(den)

    def collect(self, names: Iterable[str]) -> dict[tuple[tuple[str, int], ...], "RatFunc"]:
        """Group by monomials in ``names``; the denominator must avoid them.

        Keys are sorted ``(name, exponent)`` tuples, ``()`` for the part free
        of ``names``.
        """
        own = _ring_names(self._num.ring)
        picked = [i for i, n in enumerate(own) if n in set(names)]
        if any(mon[i] for mon in self._den.monoms() for i in picked):
            raise ValueError("denominator depends on a collected variable")
        groups: dict[tuple, dict] = {}
        for mon, c in self._num.terms():
            key = tuple((own[i], mon[i]) for i in picked if mon[i])
            rest = tuple(0 if i in picked else e for i, e in enumerate(mon))
            groups.setdefault(key, {})[rest] = c
        R = self._num.ring
        return {k: RatFunc(R.from_dict(v), self._den) for k, v in sorted(groups.items())}

    # printing -----------------------------------------------------------

    def render(self) -> str:
        """Canonical text accepted by :func:`webrank.expr.parse`."""
        if self._den == self._den.ring.one:
            return _render_poly(self._num)
        # integer coefficients with coprime contents read better than a monic denominator
        N, D = self._num, self._den
        scale = 1
        for p in (N, D):
            for c in p.coeffs():
                scale = lcm(scale, _to_fraction(c).denominator)
        content = 0
        for p in (N, D):
            for c in p.coeffs():
                content = gcd(content, (_to_fraction(c) * scale).numerator)
        factor = QQ(scale, content)
        N, D = N * factor, D * factor
        num, den = _render_poly(N), _render_poly(D)
        if len(N.terms()) > 1:
            num = f"({num})"
        if len(D.terms()) > 1 or not _is_atom(D):
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"RatFunc({self.render()!r})"


def _is_atom(p: PolyElement) -> bool:
    (mon, c), = p.terms()
    return c == 1 and sum(mon) <= 1


def _render_poly(p: PolyElement) -> str:
    if not p:
        return "0"
    names = _ring_names(p.ring)
    out = []
    for mon, c in p.terms():  # terms() is already in grlex descending order
        c = _to_fraction(c)
        factors = []
        for n, e in zip(names, mon):
            if e == 1:
                factors.append(n)
            elif e:
                factors.append(f"{n}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        elif mag.denominator == 1:
            body = f"{mag.numerator}*" + "*".join(factors)
        else:
            body = f"{mag.numerator}/{mag.denominator}*" + "*".join(factors)
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def var(name: str) -> RatFunc:
    return RatFunc.var(name)


def const(c: Scalar) -> RatFunc:
    return RatFunc.const(c)


def probably_zero(r: RatFunc, samples: int = 20, seed: int = 0) -> bool:
    """Evaluate at random rational points; fast but one-sided.

    Classification never relies on this; it exists for quick screening.
    """
    rng = random.Random(seed)
    names = r.variables
    hits = 0
    for _ in range(samples * 5):
        pt = {n: Fraction(rng.randint(-97, 97), rng.randint(1, 13)) for n in names}
        try:
            if r.eval_at(pt) != 0:
                return False
        except PoleAtPoint:
            continue
        hits += 1
        if hits >= samples:
            break
    return True
