"""Equivalence tests for Painleve I, Painleve II and Painleve III(0,b,0,0).

Each check evaluates its theorem's condition list with sound zero tests,
records every condition in an :class:`InvariantReport`, and attaches the
weight-0 invariants needed to build the explicit change of variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Optional

import sympy as sp

from .exprkernel import (DEFAULT_SEED, X, Y, ZeroVerdict, is_identically_zero,
                         normalize, sample_point, evaluate_numeric,
                         PoleAtPoint, EvenRootOfNegative)
from .invariants import (BothComponentsZero, GammaUndefined, InvariantPipeline,
                         Pseudo)
from .parsing import OdeCubic

__all__ = [
    "ConditionCheck", "InvariantReport", "Classification", "SqrtOfNonPositive",
    "check_painleve1", "check_painleve2", "check_painleve3zero", "classify",
    "sqrt_up_to_sign",
]


class SqrtOfNonPositive(ArithmeticError):
    """I9 is not a square and evaluates non-positive at verification points."""


@dataclass(frozen=True)
class ConditionCheck:
    label: str
    paper_ref: str
    verdict: ZeroVerdict
    holds: Optional[bool]  # None when the verdict is Unknown


@dataclass
class InvariantReport:
    """Everything one theorem check computed, for diagnostics and map building."""

    target: Literal["painleve1", "painleve2", "painleve3_zero"]
    ode: OdeCubic
    seed: int
    conditions: list[ConditionCheck] = field(default_factory=list)
    pseudos: dict[str, Pseudo] = field(default_factory=dict)
    invariants: dict[str, sp.Expr] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> Optional[bool]:
        if any(c.holds is None for c in self.conditions):
            return None
        return all(c.holds for c in self.conditions)

    @property
    def failed_conditions(self) -> list[ConditionCheck]:
        return [c for c in self.conditions if c.holds is False]

    def condition(self, label_prefix: str) -> ConditionCheck:
        for c in self.conditions:
            if c.label.startswith(label_prefix):
                return c
        raise KeyError(label_prefix)


@dataclass(frozen=True)
class Classification:
    kind: Literal["painleve1", "painleve2", "painleve3_zero",
                  "not_equivalent", "indeterminate"]
    reports: dict[str, InvariantReport]
    J: Optional[sp.Expr] = None
    diagnostics: tuple[str, ...] = ()

    @property
    def equivalent(self) -> bool:
        return self.kind in ("painleve1", "painleve2", "painleve3_zero")


def sqrt_up_to_sign(e: sp.Expr) -> sp.Expr:
    """Square root of a rational function, determined up to overall sign.

    Factors over Q; even-multiplicity factors come out as rational functions,
    the residual (including a possibly non-square rational constant or free
    parameters) stays under a formal square root.
    """
    e = normalize(sp.sympify(e))
    if e == 0:
        return sp.Integer(0)
    num, den = e.as_numer_denom()
    out = sp.Integer(1)
    residual = sp.Integer(1)
    for part, sign in ((num, 1), (den, -1)):
        coeff, factors = sp.factor_list(part)
        for base, mult in [(sp.sympify(coeff), 1)] + list(factors):
            half, odd = divmod(mult, 2)
            out *= base ** (half * sign)
            if odd:
                residual *= base ** sign
    return normalize(out) * sp.sqrt(residual)


def _check(report: InvariantReport, label: str, ref: str, verdict: ZeroVerdict,
           want_zero: bool) -> None:
    holds: Optional[bool]
    if verdict.is_unknown:
        holds = None
    else:
        holds = verdict.is_zero if want_zero else verdict.is_nonzero
    report.conditions.append(ConditionCheck(label, ref, verdict, holds))


def _alpha_condition(pipe: InvariantPipeline, report: InvariantReport,
                     theorem: str) -> bool:
    """Condition 1 of every theorem: F = 0 but alpha not identically zero."""
    try:
        pipe.branch
    except BothComponentsZero:
        report.conditions.append(ConditionCheck(
            f"{theorem} condition 1: F = 0 with alpha != 0",
            f"{theorem}(1)",
            ZeroVerdict("zero", "alpha = 0: A and B vanish identically"),
            False))
        report.warnings.append("alpha = 0 (A and B vanish identically)")
        return False
    _check(report, f"{theorem} condition 1: F = 0 with alpha != 0",
           f"{theorem}(1)", pipe.f_verdict, want_zero=True)
    return bool(report.conditions[-1].holds)


def _store_common(pipe: InvariantPipeline, report: InvariantReport,
                  names: tuple[str, ...]) -> None:
    for name in names:
        try:
            report.pseudos[name] = pipe.pseudo(name)
        except (BothComponentsZero, GammaUndefined):
            pass
    report.warnings.extend(pipe.warnings)


def check_painleve1(ode: OdeCubic, seed: int = DEFAULT_SEED,
                    pipe: InvariantPipeline | None = None) -> InvariantReport:
    """Theorem 1 test: seven conditions; on pass attaches I1 = L1^4/L^5 and
    I2 = Theta^2/L."""
    pipe = pipe or InvariantPipeline(ode, seed=seed)
    report = InvariantReport("painleve1", ode, seed)
    th = "Theorem 1"
    if not _alpha_condition(pipe, report, th):
        return report
    zv = pipe.zero_verdict
    _check(report, f"{th} condition 2: Omega = 0", f"{th}(2)", zv(pipe.Omega), True)
    _check(report, f"{th} condition 3: N = 0", f"{th}(3)", zv(pipe.N), True)
    if not all(c.holds for c in report.conditions):
        # Theta and everything after it are well defined only on the
        # subclass cut out by conditions 1-3, so stop here.
        report.warnings.append("conditions 4-7 not evaluated: an earlier "
                               "condition already fails")
        _store_common(pipe, report, ("alpha", "N", "Omega"))
        return report
    _check(report, f"{th} condition 4: W = 0", f"{th}(4)", zv(pipe.W), True)
    _check(report, f"{th} condition 5: V = 0", f"{th}(5)", zv(pipe.V), True)
    _check(report, f"{th} condition 6: Theta != 0", f"{th}(6)", zv(pipe.Theta), False)
    _check(report, f"{th} condition 7: L1 != 0", f"{th}(7)", zv(pipe.L1), False)
    _store_common(pipe, report,
                  ("alpha", "N", "Omega", "Theta", "theta", "L", "L1", "W", "V"))
    if report.passed:
        report.invariants["I1"] = normalize(pipe.L1**4 / pipe.L**5)
        report.invariants["I2"] = normalize(pipe.Theta**2 / pipe.L)
    return report


def _pii_style_invariants(pipe: InvariantPipeline, report: InvariantReport) -> None:
    I1 = normalize(pipe.M / pipe.N**2)
    I3 = normalize(pipe.Gamma / pipe.M)
    xi1, xi2 = pipe.xi
    I6 = normalize((pipe.B * sp.diff(I3, X) - pipe.A * sp.diff(I3, Y)) / pipe.N)
    I9 = normalize((xi1 * sp.diff(I3, X) + xi2 * sp.diff(I3, Y))**2 / pipe.N**3)
    report.invariants.update(I1=I1, I3=I3, I6=I6, I9=I9)


def _constant_J(report: InvariantReport, seed: int) -> sp.Expr:
    """J = (1/50)(4 + 10*I6 - 60*I3)/sqrt(I9), determined up to sign.

    Computed symbolically when J^2 is a constant rational function (possibly
    of the parameters); raises SqrtOfNonPositive when I9 is negative at the
    verification points so no real J exists.
    """
    I3, I6, I9 = (report.invariants[k] for k in ("I3", "I6", "I9"))
    num = sp.Rational(1, 50) * (4 + 10 * I6 - 60 * I3)
    j_sq = normalize(num**2 / I9)
    dx_v = is_identically_zero(sp.diff(j_sq, X), seed=seed)
    dy_v = is_identically_zero(sp.diff(j_sq, Y), seed=seed)
    if dx_v.is_nonzero or dy_v.is_nonzero:
        report.warnings.append("J^2 is not constant; equation cannot be "
                               "point-equivalent to Painleve II")
        return sp.nan
    if dx_v.is_unknown or dy_v.is_unknown:
        return _numeric_constant_J(report, j_sq, seed)
    params = sorted(j_sq.free_symbols, key=str)
    if not params and j_sq.is_Rational and j_sq < 0:
        raise SqrtOfNonPositive(f"J^2 = {j_sq} < 0: no real parameter value")
    j = sqrt_up_to_sign(j_sq)
    report.warnings.append("J is determined up to sign")
    return j


def _numeric_constant_J(report: InvariantReport, j_sq: sp.Expr,
                        seed: int) -> sp.Expr:
    """Numeric fallback: J accepted as constant only when samples agree to 1e-20."""
    import random

    rng = random.Random(seed)
    values = []
    for _ in range(32):
        if len(values) >= 6:
            break
        point = sample_point(j_sq, rng)
        try:
            values.append(evaluate_numeric(j_sq, point, precision=60))
        except (PoleAtPoint, EvenRootOfNegative):
            continue
    if len(values) < 2:
        report.warnings.append("could not sample J^2 at non-singular points")
        return sp.nan
    import mpmath

    spread = max(values) - min(values)
    scale = max(mpmath.mpf(1), max(abs(v) for v in values))
    if spread > scale * mpmath.mpf("1e-20"):
        report.warnings.append("J^2 varies across sample points; not constant")
        return sp.nan
    mean = sum(values) / len(values)
    if mean < 0:
        raise SqrtOfNonPositive(f"J^2 ~ {float(mean)} < 0 at verification points")
    j = sp.sqrt(sp.nsimplify(sp.Float(mean, 40), rational=True, tolerance=1e-24))
    report.warnings.append("J determined numerically (up to sign) from "
                           f"{len(values)} agreeing samples")
    return j


def check_painleve2(ode: OdeCubic, seed: int = DEFAULT_SEED,
                    pipe: InvariantPipeline | None = None) -> InvariantReport:
    """Theorem 2 test; on pass attaches I1, I3, I6, I9 and the parameter J."""
    pipe = pipe or InvariantPipeline(ode, seed=seed)
    report = InvariantReport("painleve2", ode, seed)
    th = "Theorem 2"
    if not _alpha_condition(pipe, report, th):
        return report
    zv = pipe.zero_verdict
    _check(report, f"{th} condition 2: Omega = 0", f"{th}(2)", zv(pipe.Omega), True)
    _check(report, f"{th} condition 3: M != 0", f"{th}(3)", pipe.m_verdict, False)
    if pipe.m_verdict.is_zero:
        _store_common(pipe, report, ("alpha", "N", "M", "Omega"))
        return report
    I1 = normalize(pipe.M / pipe.N**2)
    _check(report, f"{th} condition 4: I1 = 18/5", f"{th}(4)",
           zv(I1 - sp.Rational(18, 5)), True)
    _store_common(pipe, report, ("alpha", "N", "M", "Omega", "xi", "Gamma"))
    _pii_style_invariants(pipe, report)
    if report.passed:
        report.invariants["J"] = _constant_J(report, seed)
    return report


def check_painleve3zero(ode: OdeCubic, seed: int = DEFAULT_SEED,
                        pipe: InvariantPipeline | None = None) -> InvariantReport:
    """Theorem 3 test (Painleve III with three zero parameters); no map exists
    because the invariants are constants."""
    pipe = pipe or InvariantPipeline(ode, seed=seed)
    report = InvariantReport("painleve3_zero", ode, seed)
    th = "Theorem 3"
    if not _alpha_condition(pipe, report, th):
        return report
    zv = pipe.zero_verdict
    _check(report, f"{th} condition 2: Omega = 0", f"{th}(2)", zv(pipe.Omega), True)
    _check(report, f"{th} condition 3: M != 0", f"{th}(3)", pipe.m_verdict, False)
    if pipe.m_verdict.is_zero:
        _store_common(pipe, report, ("alpha", "N", "M", "Omega"))
        return report
    I1 = normalize(pipe.M / pipe.N**2)
    _check(report, f"{th} condition 4: I1 = 3/5", f"{th}(4)",
           zv(I1 - sp.Rational(3, 5)), True)
    _store_common(pipe, report, ("alpha", "N", "M", "Omega", "xi", "Gamma"))
    if report.passed:
        _pii_style_invariants(pipe, report)
    return report


def classify(ode: OdeCubic, seed: int = DEFAULT_SEED) -> Classification:
    """Run all three theorem checks; the I1 / N conditions make the classes
    mutually exclusive, so at most one passes."""
    pipe = InvariantPipeline(ode, seed=seed)
    reports: dict[str, InvariantReport] = {}
    diagnostics: list[str] = []
    sqrt_failure = None
    r1 = check_painleve1(ode, seed=seed, pipe=pipe)
    reports["painleve1"] = r1
    if r1.passed:
        return Classification("painleve1", reports)
    try:
        r2 = check_painleve2(ode, seed=seed, pipe=pipe)
    except SqrtOfNonPositive as exc:
        sqrt_failure = str(exc)
        r2 = None
    if r2 is not None:
        reports["painleve2"] = r2
        if r2.passed:
            return Classification("painleve2", reports, J=r2.invariants.get("J"))
    r3 = check_painleve3zero(ode, seed=seed, pipe=pipe)
    reports["painleve3_zero"] = r3
    if r3.passed:
        return Classification("painleve3_zero", reports)
    if sqrt_failure is not None:
        diagnostics.append(f"Theorem 2 conditions hold but {sqrt_failure}")
        return Classification("indeterminate", reports, diagnostics=tuple(diagnostics))
    unknown = any(r.passed is None for r in reports.values())
    for name, rep in reports.items():
        for cond in rep.failed_conditions:
            diagnostics.append(f"{cond.label} fails ({cond.verdict.note})")
    if unknown and not diagnostics:
        return Classification("indeterminate", reports, diagnostics=tuple(
            d for r in reports.values() for d in r.warnings))
    return Classification("not_equivalent", reports, diagnostics=tuple(diagnostics))
