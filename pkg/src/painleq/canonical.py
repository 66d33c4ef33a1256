"""Reference equations used across tests, demos and documentation."""

from __future__ import annotations

import sympy as sp

from .exprkernel import X, Y
from .parsing import OdeCubic, extract_cubic_coefficients, parse_expression

__all__ = [
    "painleve1", "painleve2", "painleve3_zero", "kamke_6_9",
    "kamke_6_9_sign_corrected", "example1_trigonometric",
]

_zero = sp.Integer(0)


def painleve1() -> OdeCubic:
    """y'' = 6y^2 + x."""
    return OdeCubic(6 * Y**2 + X, _zero, _zero, _zero)


def painleve2(a: sp.Expr | int | None = None) -> OdeCubic:
    """y'' = 2y^3 + x*y + a (symbolic parameter by default)."""
    a = sp.Symbol("a") if a is None else sp.sympify(a)
    return OdeCubic(2 * Y**3 + X * Y + a, _zero, _zero, _zero)


def painleve3_zero(b: sp.Expr | int | None = None) -> OdeCubic:
    """y'' = y'^2/y - y'/x + b/x, the b-family with the other parameters zero."""
    b = sp.Symbol("b") if b is None else sp.sympify(b)
    return extract_cubic_coefficients(
        parse_expression("p^2/y - p/x") + b / X)


def kamke_6_9(a=None, b=None, c=None, d=None) -> OdeCubic:
    """y'' = -a*y^3 - b*x*y - c*y - d, with symbolic parameters by default.

    As published this family has J^2 = -a*d^2/(2*b^2), negative for positive
    a, so the real equivalence to Painleve II fails even though the four
    theorem conditions hold; see :func:`kamke_6_9_sign_corrected`.
    """
    a, b, c, d = (sp.Symbol(n) if v is None else sp.sympify(v)
                  for n, v in zip("abcd", (a, b, c, d)))
    return OdeCubic(-a * Y**3 - b * X * Y - c * Y - d, _zero, _zero, _zero)


def kamke_6_9_sign_corrected(a=None, b=None, c=None, d=None) -> OdeCubic:
    """y'' = a*y^3 - b*x*y - c*y - d: the cubic-term sign under which the
    published change of variables and J = -sqrt(a/2)*d/b actually hold."""
    a, b, c, d = (sp.Symbol(n) if v is None else sp.sympify(v)
                  for n, v in zip("abcd", (a, b, c, d)))
    return OdeCubic(a * Y**3 - b * X * Y - c * Y - d, _zero, _zero, _zero)


def example1_trigonometric() -> OdeCubic:
    """The trigonometric disguise of Painleve I under
    (x_new, y_new) = (x*sin(y), x*cos(y))."""
    sy, cy = sp.sin(Y), sp.cos(Y)
    p_ = -sy**3 * (6 * X * cy**2 + sy)
    q3 = (-18 * X**3 * cy**3 * sy**2 - 3 * X**2 * sy**3 * cy - 2) / X
    r3 = -(18 * X**3 * cy**4 * sy + 3 * X**2 * sy**2 * cy**2)
    s_ = -(6 * X**4 * cy**5 + X**3 * sy * cy**3 + X)
    return OdeCubic(p_, q3 / 3, r3 / 3, s_)
