import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cargeom.errors import ExprSyntaxError, MalformedPowerError, PoleError, UnknownVariableError
from cargeom.expr import as_expr, eval_jet, parse_expr

CHART = ("x", "y", "p", "q")


def test_car_ode_parses_and_evaluates():
    f = parse_expr("3*p*q^2/(1+p^2)", CHART)
    assert f((0.0, 0.0, 1.0, 2.0)) == 6.0
    assert not f.depends_on("x") and not f.depends_on("y")
    assert f.depends_on("p") and f.depends_on("q")


def test_zero_expression():
    f = parse_expr("0", CHART)
    assert f((1.0, 2.0, 3.0, 4.0)) == 0.0
    assert not any(f.depends_on(n) for n in CHART)
    assert not np.any(eval_jet(f, (1, 2, 3, 4), 4).coeffs)


@pytest.mark.parametrize(
    "text, position, kind",
    [
        ("q^", 2, MalformedPowerError),
        ("q^1.5", 2, MalformedPowerError),
        ("q^-1", 2, MalformedPowerError),
        ("z + 1", 0, UnknownVariableError),
        ("x + w", 4, UnknownVariableError),
        ("(x + 1", 6, ExprSyntaxError),
        ("x + * y", 4, ExprSyntaxError),
        ("x $ y", 2, ExprSyntaxError),
        ("sin x", 4, ExprSyntaxError),
        ("", 0, ExprSyntaxError),
    ],
)
def test_syntax_errors_report_offsets(text, position, kind):
    with pytest.raises(kind) as info:
        parse_expr(text, CHART)
    assert info.value.position == position


def test_precedence():
    f = parse_expr("-x^2 + 2*y/4 - 3", CHART)
    assert f((3.0, 2.0, 0.0, 0.0)) == -9.0 + 1.0 - 3.0
    g = parse_expr("2^3", CHART)
    assert g((0, 0, 0, 0)) == 8.0


def test_functions():
    f = parse_expr("sin(x) + cos(y) + tan(p) + sec(q) + sqrt(x + 1)", CHART)
    pt = (0.3, 0.4, 0.5, 0.6)
    expected = math.sin(0.3) + math.cos(0.4) + math.tan(0.5) + 1 / math.cos(0.6) + math.sqrt(1.3)
    assert f(pt) == pytest.approx(expected, rel=1e-15)


def test_float_evaluation_poles():
    with pytest.raises(PoleError):
        parse_expr("1/(x - 1)", CHART)((1, 0, 0, 0))
    with pytest.raises(PoleError):
        parse_expr("tan(x)", CHART)((math.pi / 2, 0, 0, 0))


def test_combinators_and_coercion():
    f = parse_expr("x", CHART)
    g = 2 * f + 1 - f * f
    assert g((3, 0, 0, 0)) == 2 * 3 + 1 - 9
    assert (-f)((2, 0, 0, 0)) == -2
    assert as_expr(3, CHART)((0, 0, 0, 0)) == 3.0
    assert as_expr("y", CHART)((0, 5, 0, 0)) == 5.0
    with pytest.raises(ValueError):
        parse_expr("x", ("a", "b", "c", "d")) + f


leaves = st.one_of(
    st.sampled_from(CHART),
    st.integers(0, 9).map(str),
    st.floats(0.1, 5.0).map(lambda v: f"{v:.3f}"),
)


def _combine(children):
    binary = st.tuples(children, st.sampled_from("+-*"), children).map(lambda t: f"({t[0]} {t[1]} {t[2]})")
    unary = st.tuples(st.sampled_from(["sin", "cos"]), children).map(lambda t: f"{t[0]}({t[1]})")
    power = st.tuples(children, st.integers(0, 3)).map(lambda t: f"({t[0]})^{t[1]}")
    neg = children.map(lambda c: f"-({c})")
    return st.one_of(binary, unary, power, neg)


expressions = st.recursive(leaves, _combine, max_leaves=12)


@settings(max_examples=100, deadline=None)
@given(expressions, st.tuples(*[st.floats(-1.5, 1.5)] * 4))
def test_print_parse_round_trip(text, point):
    f = parse_expr(text, CHART)
    g = parse_expr(str(f), CHART)
    assert str(g) == str(f)
    a, b = f(point), g(point)
    assert a == b or (math.isnan(a) and math.isnan(b))
