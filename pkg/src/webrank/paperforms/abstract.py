"""Abstract jet calculus over free symbols.

Jets are kept normal ordered and are plain ratfield variables named
``s_j_k`` (e.g. ``a_2_1``) standing for ``j`` applications of ``delta_1``
and ``k`` of ``delta_2``.  By default ``delta_1`` is outermost, so
``s_j_k = delta_1^j delta_2^k s``; with ``outer=2`` the order flips to
``delta_2^k delta_1^j s``, which turns the constraint ``s_1 = 0`` into
"every jet with ``j > 0`` vanishes".  Covariant derivatives act on
homogeneous expressions by the chain rule; reordering uses
``delta_2 delta_1 V - delta_1 delta_2 V = wt(V) K V``.

Symmetric jet names such as ``a_112`` are available through
:meth:`JetAlgebra.symmetric` and :meth:`JetAlgebra.table`.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Mapping

from ..ratfield import RatFunc
from ..webcalc import Weighted

__all__ = ["JetAlgebra", "AbstractFrame", "jet_var", "parse_jet_var"]

BASE_WEIGHTS = {"a": 0, "b": 0, "K": 2}


def jet_var(base: str, j: int, k: int) -> str:
    return f"{base}_{j}_{k}"


def parse_jet_var(name: str, bases: Mapping[str, int] | None = None) -> tuple[str, int, int] | None:
    parts = name.split("_")
    if len(parts) != 3 or parts[0] not in (BASE_WEIGHTS if bases is None else bases):
        return None
    try:
        return parts[0], int(parts[1]), int(parts[2])
    except ValueError:
        return None


class JetAlgebra:
    """Covariant derivatives on rational functions of normal-ordered jets."""

    def __init__(self, bases: Mapping[str, int] | None = None, outer: int = 1):
        if outer not in (1, 2):
            raise ValueError("outer must be 1 or 2")
        self.weights = dict(BASE_WEIGHTS if bases is None else bases)
        self.outer = outer
        self._slow: dict[tuple[str, int, int], RatFunc] = {}
        self._sym: dict[tuple[str, tuple[int, ...]], RatFunc] = {}

    def jet(self, base: str, j: int = 0, k: int = 0) -> RatFunc:
        return RatFunc.var(jet_var(base, j, k))

    def weight_of(self, name: str) -> int:
        base, j, k = parse_jet_var(name, self.weights)
        return self.weights[base] + j + k

    def _step(self, base: str, j: int, k: int, i: int) -> tuple[int, int]:
        return (j + 1, k) if i == 1 else (j, k + 1)

    def _slow_jet(self, base: str, j: int, k: int) -> RatFunc:
        """The inner direction applied to an outermost-ordered jet."""
        key = (base, j, k)
        hit = self._slow.get(key)
        if hit is None:
            outer_count = j if self.outer == 1 else k
            inner = 3 - self.outer
            if outer_count == 0:
                hit = self.jet(base, *self._step(base, j, k, inner))
            else:
                pj, pk = (j - 1, k) if self.outer == 1 else (j, k - 1)
                prev = self._slow_jet(base, pj, pk)
                wt = self.weights[base] + pj + pk
                hit = self.delta(self.outer, prev)
                if wt:
                    # [delta_2, delta_1] = wt K, seen from either side
                    sign = 1 if self.outer == 1 else -1
                    hit = hit + sign * wt * self.jet("K") * self.jet(base, pj, pk)
            self._slow[key] = hit
        return hit

    def delta(self, i: int, expr: RatFunc) -> RatFunc:
        """Covariant derivative of a weighted-homogeneous expression."""
        out = RatFunc.const(0)
        for name in expr.variables:
            parsed = parse_jet_var(name, self.weights)
            if parsed is None:
                raise ValueError(f"{name!r} is not a jet symbol")
            base, j, k = parsed
            if i == self.outer:
                dv = self.jet(base, *self._step(base, j, k, i))
            else:
                dv = self._slow_jet(base, j, k)
            out = out + expr.derivative(name) * dv
        return out

    def sequence(self, base: str, seq: tuple[int, ...]) -> RatFunc:
        """Apply ``delta_{seq[0]}`` first."""
        e = self.jet(base)
        for i in seq:
            e = self.delta(i, e)
        return e

    def symmetric(self, base: str, index: tuple[int, ...]) -> RatFunc:
        key = (base, tuple(sorted(index)))
        hit = self._sym.get(key)
        if hit is None:
            orders = sorted(set(permutations(key[1])))
            acc = RatFunc.const(0)
            for o in orders:
                acc = acc + self.sequence(base, o)
            hit = acc / len(orders)
            self._sym[key] = hit
        return hit

    def table(self, depth: int = 3, k_depth: int | None = None, bases=("a",)) -> dict[str, RatFunc]:
        """Symmetric names (``a``, ``a_12``, ``K_2`` ...) mapped to expressions."""
        if k_depth is None:
            k_depth = max(depth - 1, 0)
        out = {"K": self.jet("K")}
        for base in bases:
            for idx in _indices(depth):
                out[_name(base, idx)] = self.symmetric(base, idx)
        for idx in _indices(k_depth):
            out[_name("K", idx)] = self.symmetric("K", idx)
        if "a" in bases:
            out["a_3"] = out["a_2"] - out["a_1"]
            out["a_4"] = out["a"] * out["a_2"] - out["a_1"]
        return out


class AbstractFrame:
    """Frame-shaped view of a :class:`JetAlgebra` for the obstruction engine.

    ``a`` and ``b`` stand for the basic invariants and ``K`` for the
    curvature, so the engine's coefficients come out as rational functions
    of free jet symbols, valid for every web at once.
    """

    def __init__(self, d: int, algebra: JetAlgebra | None = None):
        if d not in (3, 4, 5):
            raise ValueError("abstract frames cover d = 3, 4, 5")
        self.J = algebra or JetAlgebra()
        self.d = d
        self.basic = (RatFunc.const(1), self.J.jet("a"), self.J.jet("b"))[: d - 2]
        self.K = Weighted(self.J.jet("K"), 2)

    @property
    def a(self) -> RatFunc:
        return self.basic[1]

    @property
    def b(self) -> RatFunc:
        return self.basic[2]

    def cov(self, i: int, u):
        return Weighted(self.J.delta(i, u.value), u.weight + 1)


@lru_cache(maxsize=None)
def _indices(depth: int) -> tuple[tuple[int, ...], ...]:
    out = [()]
    for n in range(1, depth + 1):
        for ones in range(n, -1, -1):
            out.append((1,) * ones + (2,) * (n - ones))
    return tuple(out)


def _name(base: str, idx: tuple[int, ...]) -> str:
    return base if not idx else f"{base}_{''.join(map(str, idx))}"
