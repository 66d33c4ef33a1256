"""Kernel-level behavior: normalization, zero testing, numeric evaluation."""

import random
from fractions import Fraction

import mpmath
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from painleq.exprkernel import (DEFAULT_SEED, EvenRootOfNegative, PoleAtPoint,
                                X, Y, DegenerateSubstitution, differentiate,
                                evaluate_numeric, is_identically_zero,
                                normalize, random_rational, substitute)


def test_normalize_cancels_rational_functions():
    e = (X**2 - Y**2) / (X - Y)
    assert normalize(e) == X + Y


def test_normalize_zero():
    assert normalize(X - X) == 0
    assert normalize((X + 1)**2 - X**2 - 2 * X - 1) == 0


def test_normalize_cos_square_rewrite():
    e = sp.cos(Y)**2 + sp.sin(Y)**2 - 1
    assert normalize(e) == 0
    e = sp.cos(Y)**4 - (1 - sp.sin(Y)**2)**2
    assert normalize(e) == 0


def test_normalize_keeps_odd_cos_power():
    e = normalize(sp.cos(Y)**3)
    # one cos factor survives, the square is rewritten
    assert e.has(sp.cos) and not any(
        t.is_Pow and t.base.func is sp.cos and t.exp >= 2
        for t in sp.preorder_traversal(e))


@st.composite
def rational_exprs(draw):
    coeffs = draw(st.lists(st.integers(-5, 5), min_size=1, max_size=4))
    e = sum(c * X**i * Y**(i % 2) for i, c in enumerate(coeffs))
    if draw(st.booleans()):
        e = e / (1 + X**2)
    return e


@settings(max_examples=40, deadline=None)
@given(rational_exprs())
def test_normalize_idempotent(e):
    n = normalize(e)
    assert normalize(n) == n


@settings(max_examples=25, deadline=None)
@given(rational_exprs(), rational_exprs())
def test_mixed_partials_commute(e, f):
    g = e + f * Y
    assert normalize(differentiate(differentiate(g, X), Y)
                     - differentiate(differentiate(g, Y), X)) == 0


def test_differentiate_rejects_parameters():
    with pytest.raises(ValueError):
        differentiate(X, sp.Symbol("a"))


def test_zero_verdict_tristate():
    assert is_identically_zero(X - X).is_zero
    assert is_identically_zero(X + 1).is_nonzero
    v = is_identically_zero(X)
    with pytest.raises(TypeError):
        bool(v)


def test_zero_verdict_trig_nonzero():
    v = is_identically_zero(sp.sin(X) + X)
    assert v.is_nonzero


def test_zero_verdict_trig_zero_via_normal_form():
    v = is_identically_zero(sp.sin(X)**2 + sp.cos(X)**2 - 1)
    assert v.is_zero


def test_evaluate_real_odd_root():
    v = evaluate_numeric(sp.Integer(-8)**sp.Rational(1, 3), {})
    assert abs(v + 2) < mpmath.mpf("1e-50")


def test_evaluate_even_root_of_negative():
    with pytest.raises(EvenRootOfNegative):
        evaluate_numeric(sp.sqrt(X), {X: Fraction(-1)})


def test_evaluate_pole():
    with pytest.raises(PoleAtPoint):
        evaluate_numeric(1 / (X - 1), {X: Fraction(1)})


def test_evaluate_log_pole():
    with pytest.raises(PoleAtPoint):
        evaluate_numeric(sp.log(X), {X: Fraction(0)})


def test_substitute_simultaneous():
    e = substitute(X * Y, {X: Y, Y: X})
    assert e == X * Y


def test_substitute_degenerate():
    with pytest.raises(DegenerateSubstitution):
        substitute(1 / (X - Y), {X: Y})


def test_random_rational_range():
    rng = random.Random(DEFAULT_SEED)
    for _ in range(100):
        r = random_rational(rng)
        assert 1 <= r <= 2
