"""Evaluate stored formula text over a table of named rational functions."""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping

from .expr import DivisionByZeroPolynomial, Expr, _free_names, evaluate, parse
from .ratfield import RatFunc

__all__ = ["MissingSymbol", "DenominatorVanishes", "formula", "eval_formula", "symbols_of"]


class MissingSymbol(KeyError):
    pass


class DenominatorVanishes(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def formula(text: str) -> Expr:
    return parse(text, variables=None)


@lru_cache(maxsize=None)
def symbols_of(text: str) -> frozenset[str]:
    return frozenset(_free_names(formula(text)))


def eval_formula(text: str, table: Mapping[str, RatFunc], *, symbolic_ok: bool = False) -> RatFunc:
    """Evaluate ``text`` with every identifier looked up in ``table``.

    With ``symbolic_ok`` unknown names stay as free variables.
    """
    if not symbolic_ok:
        missing = sorted(n for n in symbols_of(text) if n not in table)
        if missing:
            raise MissingSymbol(", ".join(missing))
    try:
        return evaluate(formula(text), table)
    except DivisionByZeroPolynomial as exc:
        raise DenominatorVanishes(str(exc)) from None
