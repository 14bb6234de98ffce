"""Expression text -> AST -> RatFunc.

Grammar, loosest binding first::

    sum     := product (("+" | "-") product)*
    product := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" unary)?          # right associative
    atom    := NUMBER | NAME | "ln" "(" sum ")" | "(" sum ")"

Exponents must fold to integer constants.  There is no implicit
multiplication.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .ratfield import DivisionByZeroFunction, RatFunc

__all__ = [
    "Expr",
    "Variable",
    "Constant",
    "Add",
    "Mul",
    "Div",
    "Pow",
    "Neg",
    "Ln",
    "ExprError",
    "ExprSyntaxError",
    "UnknownIdentifier",
    "NonIntegerExponent",
    "ContainsTranscendental",
    "DivisionByZeroPolynomial",
    "DomainViolation",
    "parse",
    "lower",
    "evaluate",
    "evaluate_numeric",
    "to_text",
    "parse_ratfunc",
]


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text[:pos]}<HERE>{text[pos:]}")
        self.pos = pos


class UnknownIdentifier(ExprError):
    def __init__(self, name: str, pos: int):
        super().__init__(f"unknown identifier {name!r} at position {pos}")
        self.name = name
        self.pos = pos


class NonIntegerExponent(ExprError):
    def __init__(self, pos: int):
        super().__init__(f"exponent is not an integer constant at position {pos}")
        self.pos = pos


class ContainsTranscendental(ExprError):
    pass


class DivisionByZeroPolynomial(ExprError):
    pass


class DomainViolation(ExprError):
    pass


# AST ---------------------------------------------------------------------


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Variable(Expr):
    name: str


@dataclass(frozen=True)
class Constant(Expr):
    value: Fraction


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Div(Expr):
    num: Expr
    den: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Neg(Expr):
    inner: Expr


@dataclass(frozen=True)
class Ln(Expr):
    inner: Expr


# lexer -------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[start]!r}", text, start)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, names: frozenset[str] | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.names = names

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        kind, v, pos = self.take()
        if v != value or kind == "end":
            what = "end of input" if kind == "end" else repr(v)
            raise ExprSyntaxError(f"expected {value!r}, found {what}", self.text, pos)

    def parse(self) -> Expr:
        e = self.sum()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {v!r}", self.text, pos)
        return e

    def sum(self) -> Expr:
        terms = [self.product()]
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, _ = self.take()
            t = self.product()
            terms.append(t if op == "+" else Neg(t))
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def product(self) -> Expr:
        e = self.unary()
        factors = [e]
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, _ = self.take()
            rhs = self.unary()
            if op == "*":
                factors.append(rhs)
            else:
                lhs = factors[0] if len(factors) == 1 else Mul(tuple(factors))
                factors = [Div(lhs, rhs)]
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def unary(self) -> Expr:
        if self.peek() [1] == "-" and self.peek()[0] == "op":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            _, _, pos = self.take()
            exp = _fold_constant(self.unary())
            if exp is None or exp.denominator != 1:
                raise NonIntegerExponent(pos)
            return Pow(base, int(exp))
        return base

    def atom(self) -> Expr:
        kind, v, pos = self.take()
        if kind == "num":
            return Constant(Fraction(v))
        if kind == "name":
            if v == "ln":
                self.expect("(")
                inner = self.sum()
                self.expect(")")
                return Ln(inner)
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                raise UnknownIdentifier(v, pos)
            if self.names is not None and v not in self.names:
                raise UnknownIdentifier(v, pos)
            return Variable(v)
        if v == "(":
            e = self.sum()
            self.expect(")")
            return e
        what = "end of input" if kind == "end" else repr(v)
        raise ExprSyntaxError(f"unexpected {what}", self.text, pos)


def _fold_constant(e: Expr) -> Fraction | None:
    if isinstance(e, Constant):
        return e.value
    if isinstance(e, Neg):
        v = _fold_constant(e.inner)
        return None if v is None else -v
    if isinstance(e, Add):
        vals = [_fold_constant(t) for t in e.terms]
        return None if None in vals else sum(vals, Fraction(0))
    if isinstance(e, Mul):
        vals = [_fold_constant(t) for t in e.factors]
        return None if None in vals else math.prod(vals, start=Fraction(1))
    if isinstance(e, Div):
        n, d = _fold_constant(e.num), _fold_constant(e.den)
        return None if n is None or d is None or d == 0 else n / d
    if isinstance(e, Pow):
        b = _fold_constant(e.base)
        if b is None or (b == 0 and e.exponent < 0):
            return None
        return b**e.exponent
    return None


def parse(text: str, variables: Iterable[str] | None = ("x", "y")) -> Expr:
    """Parse ``text``; ``variables=None`` accepts any identifier."""
    names = None if variables is None else frozenset(variables)
    return _Parser(text, names).parse()


# interpretation ----------------------------------------------------------


def _walk(e: Expr, leaf: Callable, ln: Callable, one, zero):
    def go(n):
        if isinstance(n, Constant):
            return leaf(n)
        if isinstance(n, Variable):
            return leaf(n)
        if isinstance(n, Add):
            acc = zero
            for t in n.terms:
                acc = acc + go(t)
            return acc
        if isinstance(n, Mul):
            acc = one
            for t in n.factors:
                acc = acc * go(t)
            return acc
        if isinstance(n, Div):
            return go(n.num) / go(n.den)
        if isinstance(n, Pow):
            return go(n.base) ** n.exponent
        if isinstance(n, Neg):
            return -go(n.inner)
        if isinstance(n, Ln):
            return ln(go(n.inner))
        raise TypeError(f"not an Expr node: {n!r}")

    return go(e)


def evaluate(e: Expr, env: Mapping[str, RatFunc]) -> RatFunc:
    """Exact evaluation with variables bound to rational functions.

    Unbound variables stay symbolic.
    """

    def leaf(n):
        if isinstance(n, Constant):
            return RatFunc.const(n.value)
        return env[n.name] if n.name in env else RatFunc.var(n.name)

    def ln(_):
        raise ContainsTranscendental("ln() cannot be lowered to a rational function")

    try:
        return _walk(e, leaf, ln, RatFunc.const(1), RatFunc.const(0))
    except DivisionByZeroFunction as exc:
        raise DivisionByZeroPolynomial(str(exc)) from None


def lower(e: Expr, variables: Iterable[str] | None = None) -> RatFunc:
    if variables is not None:
        allowed = set(variables)
        bad = sorted(v for v in _free_names(e) if v not in allowed)
        if bad:
            raise UnknownIdentifier(bad[0], -1)
    return evaluate(e, {})


def _free_names(e: Expr) -> set[str]:
    if isinstance(e, Variable):
        return {e.name}
    kids: tuple = ()
    if isinstance(e, Add):
        kids = e.terms
    elif isinstance(e, Mul):
        kids = e.factors
    elif isinstance(e, Div):
        kids = (e.num, e.den)
    elif isinstance(e, (Pow,)):
        kids = (e.base,)
    elif isinstance(e, (Neg, Ln)):
        kids = (e.inner,)
    out: set[str] = set()
    for k in kids:
        out |= _free_names(k)
    return out


def evaluate_numeric(e: Expr, env: Mapping[str, object]):
    """Evaluate with mpmath numbers; ``ln`` of a non-positive value raises."""
    import mpmath

    def leaf(n):
        if isinstance(n, Constant):
            return mpmath.mpf(n.value.numerator) / n.value.denominator
        return env[n.name]

    def ln(v):
        if v <= 0:
            raise DomainViolation(f"ln of non-positive value {v}")
        return mpmath.log(v)

    try:
        return _walk(e, leaf, ln, mpmath.mpf(1), mpmath.mpf(0))
    except ZeroDivisionError:
        raise DomainViolation("division by zero") from None


def parse_ratfunc(text: str, variables: Iterable[str] | None = ("x", "y")) -> RatFunc:
    return lower(parse(text, variables))


def to_text(e: Expr) -> str:
    """Fully parenthesized-where-needed text that parses back to ``e``."""

    def go(n, prec):
        # prec: 0 sum, 1 product, 2 unary, 3 power base
        if isinstance(n, Constant):
            v = n.value
            s = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
            if v < 0 or (v.denominator != 1 and prec >= 1):
                return f"({s})"
            return s
        if isinstance(n, Variable):
            return n.name
        if isinstance(n, Ln):
            return f"ln({go(n.inner, 0)})"
        if isinstance(n, Add):
            parts = [go(n.terms[0], 0)]
            for t in n.terms[1:]:
                if isinstance(t, Neg):
                    parts.append(" - " + go(t.inner, 1))
                else:
                    parts.append(" + " + go(t, 1))
            s = "".join(parts)
            return f"({s})" if prec > 0 else s
        if isinstance(n, Mul):
            s = "*".join(go(f, 2) for f in n.factors)
            return f"({s})" if prec > 1 else s
        if isinstance(n, Div):
            s = f"{go(n.num, 1)}/{go(n.den, 2)}"
            return f"({s})" if prec > 1 else s
        if isinstance(n, Neg):
            s = "-" + go(n.inner, 2)
            return f"({s})" if prec > 0 else s
        if isinstance(n, Pow):
            e = n.exponent
            es = str(e) if e >= 0 else f"({e})"
            return f"{go(n.base, 3)}^{es}"
        raise TypeError(n)

    return go(e, 0)
