from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webrank.expr import parse_ratfunc as P
from webrank.ratfield import DivisionByZeroFunction, PoleAtPoint, RatFunc, probably_zero

X, Y = RatFunc.var("x"), RatFunc.var("y")


def test_cancellation_and_canonical_form():
    assert P("(x^2 - y^2)/(x - y)") == X + Y
    assert P("x/y") + P("-x/y") == 0
    assert (X - Y) * (X + Y) == P("x^2 - y^2")
    assert P("(2*x)/(4*y)") == P("x/(2*y)")


def test_partial_derivatives():
    assert P("x/y").derivative("x") == P("1/y")
    assert P("x/y").derivative("y") == P("-x/y^2")


def test_derivative_of_three_web_function():
    # independent hand computation of d/dx (2xy - x + y)/(x + y)
    assert P("(2*x*y - x + y)/(x + y)").derivative("x") == P("(2*y^2 - 2*y)/(x + y)^2")


@pytest.mark.xfail(strict=True, reason="the listed value carries a sign error in the linear term")
def test_derivative_of_three_web_function_as_listed():
    assert P("(2*x*y - x + y)/(x + y)").derivative("x") == P("(2*y^2 + 2*y)/(x + y)^2")


def test_substitute():
    t = RatFunc.var("t")
    assert (t * t - 1).substitute({"t": X / Y}) == P("(x^2 - y^2)/y^2")
    assert (1 / t).substitute({"t": X + Y}) == P("1/(x + y)")
    a = P("x^2/(x - y)")
    assert a.substitute({}) == a


def test_eval_at():
    assert P("x/y").eval_at({"x": 1, "y": 2}) == Fraction(1, 2)
    assert P("(x^2 - y^2)/(x - y)").eval_at({"x": 3, "y": 3}) == 6
    with pytest.raises(PoleAtPoint):
        P("1/(x - y)").eval_at({"x": 2, "y": 2})


def test_division_by_zero():
    with pytest.raises(DivisionByZeroFunction):
        X / (Y - Y)
    with pytest.raises(DivisionByZeroFunction):
        RatFunc.const(0).inverse()


def test_render_is_deterministic():
    a = P("(y + x)^2/(3*x)")
    b = P("(x^2 + 2*x*y + y^2)/(3*x)")
    assert a.render() == b.render()


# randomized field axioms -------------------------------------------------------

coef = st.integers(-4, 4)
poly = st.lists(st.tuples(coef, st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=4)


def _poly(terms):
    out = RatFunc.const(0)
    for c, i, j in terms:
        out = out + RatFunc.const(c) * X**i * Y**j
    return out


@st.composite
def ratfuncs(draw):
    num = _poly(draw(poly))
    den = _poly(draw(poly))
    if den.is_zero():
        den = RatFunc.const(1)
    return num / den


@settings(max_examples=200, deadline=None)
@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if not a.is_zero():
        assert a * a.inverse() == 1


@settings(max_examples=200, deadline=None)
@given(ratfuncs(), ratfuncs(), st.sampled_from(["x", "y"]))
def test_leibniz_rule(a, b, v):
    assert (a * b).derivative(v) == a.derivative(v) * b + a * b.derivative(v)


@settings(max_examples=100, deadline=None)
@given(ratfuncs())
def test_zero_tests_agree(a):
    # the exact test and the sampling fast path must never disagree on a - a and a
    assert probably_zero(a - a)
    assert probably_zero(a) == a.is_zero()
