"""Exact symbolic expression kernel.

Expressions are immutable sympy objects over the plane variables ``x``, ``y``
(plus the derivative placeholder ``p`` at parse time) with exact rational
constants and free single-letter parameters.  This module provides the four
services the rest of the pipeline is built on: differentiation, canonical
normalization, sound zero-testing, and high-precision numeric evaluation with
real root branches.

Transcendental atoms (sin, cos, exp, ln) are treated as independent
indeterminates after the rewrite ``cos(u)**2 -> 1 - sin(u)**2`` has been
applied to exhaustion, so Pythagorean cancellations are found exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Mapping

import mpmath
import sympy as sp

__all__ = [
    "X", "Y", "P",
    "ZeroVerdict", "DegenerateSubstitution", "PoleAtPoint", "EvenRootOfNegative",
    "differentiate", "normalize", "is_identically_zero", "substitute",
    "evaluate_numeric", "random_rational", "sample_point",
    "DEFAULT_SEED", "SAMPLE_COUNT", "SAMPLE_PRECISION", "ZERO_THRESHOLD",
]

X = sp.Symbol("x")
Y = sp.Symbol("y")
P = sp.Symbol("p")

# Probabilistic zero-test policy: 12 rational points in [1, 2], denominator
# <= 10**4, 60 working digits, threshold 1e-30 relative to the largest term.
DEFAULT_SEED = 20240
SAMPLE_COUNT = 12
SAMPLE_PRECISION = 60
ZERO_THRESHOLD = Fraction(1, 10**30)


class DegenerateSubstitution(ValueError):
    """Substitution produced an identically-zero denominator."""


class PoleAtPoint(ArithmeticError):
    """Numeric evaluation hit a (near-)zero denominator or a log pole."""


class EvenRootOfNegative(ArithmeticError):
    """Even root of a negative radicand at an evaluation point."""


@dataclass(frozen=True)
class ZeroVerdict:
    """Outcome of an identical-vanishing test.

    ``zero`` is only ever produced by the exact normal form; ``unknown`` is
    legal output when normalization is inconclusive and sampling stayed below
    threshold.
    """

    status: Literal["zero", "nonzero", "unknown"]
    note: str = ""

    @property
    def is_zero(self) -> bool:
        return self.status == "zero"

    @property
    def is_nonzero(self) -> bool:
        return self.status == "nonzero"

    @property
    def is_unknown(self) -> bool:
        return self.status == "unknown"

    def __bool__(self) -> bool:  # pragma: no cover - guard against misuse
        raise TypeError("ZeroVerdict is tri-state; test .is_zero / .is_nonzero")


def differentiate(e: sp.Expr, var: str | sp.Symbol) -> sp.Expr:
    """Partial derivative with respect to ``x`` or ``y``; parameters are constants."""
    s = sp.Symbol(var) if isinstance(var, str) else var
    if s not in (X, Y):
        raise ValueError(f"can only differentiate in x or y, got {s}")
    return sp.diff(sp.sympify(e), s)


def _is_cos_power(t: sp.Basic) -> bool:
    return (t.is_Pow and t.base.func is sp.cos and t.exp.is_Integer
            and (t.exp >= 2 or t.exp <= -2))


def _cos_power_to_sin(t: sp.Expr) -> sp.Expr:
    u = t.base.args[0]
    n = int(t.exp)
    return (1 - sp.sin(u) ** 2) ** (n // 2) * sp.cos(u) ** (n % 2)


def normalize(e: sp.Expr) -> sp.Expr:
    """Canonical quotient of polynomials in the variables, parameters and atoms.

    cos(u)**2 -> 1 - sin(u)**2 is applied to exhaustion, then the expression is
    flattened to a single quotient with the numerator/denominator gcd removed.
    Idempotent; the zero expression normalizes to 0.
    """
    e = sp.sympify(e)
    for _ in range(128):
        if e.has(sp.cos):
            e = e.replace(_is_cos_power, _cos_power_to_sin)
        try:
            new = sp.cancel(e)
        except (sp.PolynomialError, sp.CoercionFailed):
            new = sp.together(sp.expand(e))
        if not new.has(sp.cos):
            return new
        if not any(_is_cos_power(t) for t in sp.preorder_traversal(new)):
            return new
        e = new
    return e


def _atoms(e: sp.Expr) -> set[sp.Expr]:
    return set(e.atoms(sp.sin, sp.cos, sp.exp, sp.log))


def random_rational(rng: random.Random, lo: int = 1, hi: int = 2,
                    max_den: int = 10**4) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def sample_point(e: sp.Expr, rng: random.Random) -> dict[sp.Symbol, sp.Rational]:
    """Random rational assignment in [1, 2] for every free symbol of ``e``."""
    return {s: sp.Rational(random_rational(rng)) for s in sorted(e.free_symbols, key=str)}


def is_identically_zero(e: sp.Expr, seed: int = DEFAULT_SEED) -> ZeroVerdict:
    """Sound identical-vanishing test.

    The exact canonical form decides whenever it can; for atom-laden input
    that does not normalize to 0, evaluation at ``SAMPLE_COUNT`` random
    non-singular rational points distinguishes NonZero from Unknown.
    """
    n = normalize(e)
    if n == 0:
        return ZeroVerdict("zero", "canonical form vanishes")
    num, _den = n.as_numer_denom()
    if not _atoms(n):
        # Rational function over Q: nonzero canonical numerator is decisive.
        return ZeroVerdict("nonzero", "canonical form is a nonzero rational function")
    rng = random.Random(seed)
    tested = 0
    for _ in range(SAMPLE_COUNT * 4):
        if tested >= SAMPLE_COUNT:
            break
        point = sample_point(num, rng)
        try:
            val, scale = _eval_with_scale(num, point, SAMPLE_PRECISION)
        except (PoleAtPoint, EvenRootOfNegative):
            continue
        tested += 1
        tol = mpmath.mpf(ZERO_THRESHOLD.numerator) / mpmath.mpf(ZERO_THRESHOLD.denominator)
        if abs(val) > tol * max(scale, mpmath.mpf(1)):
            return ZeroVerdict("nonzero", f"sample {tested} exceeds tolerance")
    if tested == 0:
        return ZeroVerdict("unknown", "no non-singular sample point found")
    return ZeroVerdict("unknown",
                       f"{tested} samples below tolerance but not proved zero")


def substitute(e: sp.Expr, bindings: Mapping[sp.Symbol | str, sp.Expr]) -> sp.Expr:
    """Simultaneous substitution followed by normalization."""
    subs = {sp.Symbol(k) if isinstance(k, str) else k: sp.sympify(v)
            for k, v in bindings.items()}
    result = sp.sympify(e).subs(subs, simultaneous=True)
    result = normalize(result)
    if result.has(sp.zoo, sp.nan, sp.oo, -sp.oo):
        raise DegenerateSubstitution(
            "substitution produced an identically-zero denominator")
    return result


def evaluate_numeric(e: sp.Expr, point: Mapping[sp.Symbol | str, object],
                     precision: int = SAMPLE_PRECISION) -> mpmath.mpf:
    """Evaluate at an exact rational point to ``precision`` decimal digits.

    Odd roots of negative reals take the real branch; even roots of negative
    radicands raise EvenRootOfNegative; denominators below the underflow guard
    raise PoleAtPoint instead of returning garbage.
    """
    if precision < 30:
        raise ValueError("precision must be at least 30 digits")
    subs = {sp.Symbol(k) if isinstance(k, str) else k: v for k, v in point.items()}
    val, _scale = _eval_with_scale(sp.sympify(e), subs, precision)
    return val


def _eval_with_scale(e: sp.Expr, subs: Mapping[sp.Symbol, object],
                     precision: int):
    """Evaluate returning (value, largest intermediate magnitude)."""
    with mpmath.workdps(precision):
        guard = mpmath.mpf(10) ** (-(precision // 2))
        scale = [mpmath.mpf(0)]

        def note(v):
            a = abs(v)
            if a > scale[0]:
                scale[0] = a
            return v

        def ev(t: sp.Expr) -> mpmath.mpf:
            if t.is_Rational:
                return note(mpmath.mpf(t.p) / mpmath.mpf(t.q))
            if t.is_Float:
                return note(mpmath.mpf(str(t)))
            if t.is_Symbol:
                if t not in subs:
                    raise ValueError(f"no value assigned to symbol {t}")
                v = subs[t]
                return note(mpmath.mpf(v.numerator) / mpmath.mpf(v.denominator))
            if t.is_Add:
                return note(mpmath.fsum(ev(a) for a in t.args))
            if t.is_Mul:
                r = mpmath.mpf(1)
                for a in t.args:
                    r *= ev(a)
                return note(r)
            if t.is_Pow:
                b = ev(t.base)
                ex = t.exp
                if ex.is_Integer:
                    n = int(ex)
                    if n < 0 and abs(b) < guard:
                        raise PoleAtPoint(f"denominator {t.base} ~ 0 at sample point")
                    return note(b ** n)
                if ex.is_Rational:
                    num, den = int(ex.p), int(ex.q)
                    if b < 0:
                        if den % 2 == 0:
                            raise EvenRootOfNegative(
                                f"even root of negative radicand in {t}")
                        root = -mpmath.root(-b, den)
                    else:
                        if num < 0 and b < guard:
                            raise PoleAtPoint(f"radicand {t.base} ~ 0 under negative power")
                        root = mpmath.root(b, den)
                    if num < 0 and abs(root) < guard:
                        raise PoleAtPoint(f"root of {t.base} ~ 0 under negative power")
                    return note(root ** num)
                return note(b ** ev(ex))
            if t.func is sp.sin:
                return note(mpmath.sin(ev(t.args[0])))
            if t.func is sp.cos:
                return note(mpmath.cos(ev(t.args[0])))
            if t.func is sp.exp:
                return note(mpmath.exp(ev(t.args[0])))
            if t.func is sp.log:
                v = ev(t.args[0])
                if v < guard:
                    raise PoleAtPoint(f"ln of non-positive value in {t}")
                return note(mpmath.log(v))
            raise ValueError(f"cannot evaluate node {t!r}")

        subs = {k: _to_fraction(v) for k, v in subs.items()}
        return ev(e), scale[0]


def _to_fraction(v: object) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, sp.Rational):
        return Fraction(int(v.p), int(v.q))
    return Fraction(str(v))
