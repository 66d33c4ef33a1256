"""Grammar, printer round trips, and coefficient extraction."""

import pytest
import sympy as sp

from painleq.exprkernel import P, X, Y, normalize
from painleq.parsing import (ExprSyntaxError, NonIntegerExponent,
                             NotCubicInDerivative, OdeCubic, UnknownFunction,
                             extract_cubic_coefficients, parse_expression,
                             to_grammar)


def test_basic_arithmetic():
    assert parse_expression("2*x + 3*y") == 2 * X + 3 * Y
    assert parse_expression("x^2 - y^3") == X**2 - Y**3
    assert parse_expression("-x*y/2") == -X * Y / 2


def test_power_binds_tighter_than_unary_minus():
    assert parse_expression("-x^2") == -(X**2)


def test_functions():
    assert parse_expression("sin(x)*cos(y)") == sp.sin(X) * sp.cos(Y)
    assert parse_expression("exp(x) + ln(y)") == sp.exp(X) + sp.log(Y)


def test_decimal_literals_become_exact():
    assert parse_expression("0.5*x") == X / 2


def test_parenthesized_rational_exponent():
    assert parse_expression("x^(1/2)") == sp.sqrt(X)
    assert parse_expression("x^(-1/5)") == X**sp.Rational(-1, 5)


def test_parameters_are_single_letters():
    a = sp.Symbol("a")
    assert parse_expression("a*y^3") == a * Y**3


def test_unknown_function():
    with pytest.raises(UnknownFunction):
        parse_expression("tan(x)")


def test_syntax_errors_carry_offset():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expression("x + ")
    assert info.value.offset == 4


def test_non_integer_exponent():
    with pytest.raises(NonIntegerExponent):
        parse_expression("x^2.5")


def test_unbalanced_parens():
    with pytest.raises(ExprSyntaxError):
        parse_expression("(x + y")


@pytest.mark.parametrize("text", [
    "6*y^2 + x",
    "2*y^3 + x*y + a",
    "p^2/y - p/x + b/x",
    "x^(-1/5)",
    "12*y^2/x",
    "sin(y)*x - cos(y)/x^3",
    "exp(x)*ln(y)",
])
def test_print_parse_round_trip(text):
    e = parse_expression(text)
    assert normalize(parse_expression(to_grammar(e)) - e) == 0


def test_extract_splits_and_divides_by_three():
    rhs = parse_expression("1 + 6*p + 9*p^2 + 4*p^3")
    ode = extract_cubic_coefficients(rhs)
    assert (ode.P, ode.Q, ode.R, ode.S) == (1, 2, 3, 4)


def test_extract_rational_coefficients():
    ode = extract_cubic_coefficients(parse_expression("p^2/y - p/x"))
    assert normalize(ode.R - 1 / (3 * Y)) == 0
    assert normalize(ode.Q + 1 / (3 * X)) == 0


def test_extract_rejects_quartic():
    with pytest.raises(NotCubicInDerivative):
        extract_cubic_coefficients(parse_expression("p^4"))


def test_extract_rejects_derivative_in_denominator():
    with pytest.raises(NotCubicInDerivative):
        extract_cubic_coefficients(parse_expression("1/(1+p)"))


def test_extract_rejects_derivative_in_atom():
    with pytest.raises(NotCubicInDerivative):
        extract_cubic_coefficients(parse_expression("sin(p)"))


def test_ode_rejects_p_in_coefficient():
    with pytest.raises(ValueError):
        OdeCubic(P + 1, sp.Integer(0), sp.Integer(0), sp.Integer(0))


def test_rhs_reassembly():
    ode = OdeCubic(X, Y, X * Y, sp.Integer(2))
    assert normalize(ode.rhs() - (X + 3 * Y * P + 3 * X * Y * P**2 + 2 * P**3)) == 0


def test_free_parameters():
    a, b = sp.symbols("a b")
    ode = OdeCubic(a * Y + b, sp.Integer(0), sp.Integer(0), sp.Integer(0))
    assert ode.free_parameters() == {a, b}
