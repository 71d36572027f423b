"""Numerical asymptotics and every bound/identity check on the census.

All logarithms are natural.  High-precision values are mpmath floats
computed at an explicit precision (default 128 bits, guard bits included
by the exactmath helpers); exact comparisons stay in integers/rationals
and never pass through floating point.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from scipy.integrate import quad

from .exactmath import GUARD_BITS, bernoulli, catalan, factorial, format_rational, log_rational
from .recurrence import CensusTable, TableRangeError
from .series import scaled_tangent_series

__all__ = [
    "AsymptoticRow",
    "asymptotic_row",
    "check_lower_bound",
    "check_upper_bound",
    "check_conjecture",
    "growth_ratio",
    "bernoulli_growth_ratio",
    "series_argument",
    "series_value",
    "fit_residual_model",
    "estimate_linear_term",
    "rows_to_csv",
    "rows_to_json",
    "format_real",
    "SUPPORTED_ARGUMENT_RANGE",
]

# the integral's radicand is verified positive on [0, xi] for xi up to here
SUPPORTED_ARGUMENT_RANGE = 0.3


@dataclass(frozen=True)
class AsymptoticRow:
    """One row of the finite-size correction table."""

    n: int
    h: Fraction
    log_h: mpmath.mpf
    delta: mpmath.mpf
    delta_over_n: mpmath.mpf


def asymptotic_row(table: CensusTable, n: int, precision: int = 128) -> AsymptoticRow:
    """Stirling residual of the normalized count at index n.

    delta = log h - 2n (1 + log(n/(2n+1))) + (3/2) log(2n+1) - 1
            + (1/2) log(2 pi),

    the finite-n remainder left after subtracting the Stirling-predicted
    main terms from log h; its /n column is the quantity tabulated by the
    asymptotic experiments.
    """
    if n < 1:
        raise TableRangeError("asymptotic rows are defined for n >= 1")
    h = table.normalized_count(n)
    log_h = log_rational(h, precision)
    with mpmath.workprec(precision + GUARD_BITS):
        nn = mpmath.mpf(n)
        delta = (
            log_h
            - 2 * n * (1 + mpmath.log(nn / (2 * n + 1)))
            + mpmath.mpf(3) / 2 * mpmath.log(2 * n + 1)
            - 1
            + mpmath.log(2 * mpmath.pi) / 2
        )
        return AsymptoticRow(n, h, log_h, delta, delta / n)


def check_lower_bound(n: int, table: CensusTable) -> bool:
    """Exact comparison: normalized count at n >= ODE/tangent coefficient."""
    u_n = scaled_tangent_series(n).coefficient(2 * n + 1)
    return table.normalized_count(n) >= u_n


def check_upper_bound(n: int, table: CensusTable) -> bool:
    """Exact comparisons: h <= Catalan(n) and the sharper integer estimate
    g * (n+1) <= 2^(2n) * (2n+1)!."""
    if table.normalized_count(n) > catalan(n):
        return False
    return table.morse_count(n) * (n + 1) <= (1 << (2 * n)) * factorial(2 * n + 1)


def check_conjecture(n: int, table: CensusTable) -> bool:
    """Conjectured strict bound g < (2n+1)!, i.e. h < 1, for n >= 1."""
    if n < 1:
        raise ValueError("the conjecture is tested for n >= 1 (equality holds at n=0)")
    return table.normalized_count(n) < 1


def growth_ratio(n: int, table: CensusTable, precision: int = 128) -> mpmath.mpf:
    """log g(n) / (n log n); tends to 2 from below on the computed range."""
    if n < 2:
        raise TableRangeError("growth ratio needs n >= 2 (log n must exceed 0 cleanly)")
    log_h = log_rational(table.normalized_count(n), precision)
    with mpmath.workprec(precision + GUARD_BITS):
        log_fact = mpmath.log(mpmath.mpf(factorial(2 * n + 1)))
        return (log_h + log_fact) / (n * mpmath.log(n))


def bernoulli_growth_ratio(k: int, precision: int = 128) -> mpmath.mpf:
    """|B_2k| (4 pi^2)^k / (2 (2k)!), which decreases to 1 from above."""
    if k < 1:
        raise ValueError("bernoulli_growth_ratio requires k >= 1")
    b = abs(bernoulli(2 * k))
    with mpmath.workprec(precision + GUARD_BITS):
        scale = (4 * mpmath.pi**2) ** k / (2 * mpmath.mpf(factorial(2 * k)))
        return mpmath.mpf(b.numerator) / b.denominator * scale


# ---------------------------------------------------------------------------
# elliptic inversion of the one-variable generating series


def _radicand(t: float, target: float) -> float:
    return t**4 / 4 - t**2 + 2 * target * t + 1


def series_argument(target: float, tol: float = 1e-12) -> float:
    """Argument at which the generating series attains `target`, by quadrature.

    Inverts the series through the elliptic integral
        argument = integral_0^target dt / sqrt(t^4/4 - t^2 + 2*target*t + 1),
    using adaptive Gauss-Kronrod quadrature to absolute tolerance `tol`.
    The radicand is checked positive on a dense sample of [0, target]
    before integrating.
    """
    if not 0 <= target <= SUPPORTED_ARGUMENT_RANGE:
        raise ValueError(
            f"target {target} outside the supported range [0, {SUPPORTED_ARGUMENT_RANGE}]"
        )
    if target == 0:
        return 0.0
    samples = np.linspace(0.0, target, 257)
    if min(_radicand(t, target) for t in samples) <= 0:
        raise ValueError(f"integrand radicand not strictly positive on [0, {target}]")
    value, _err = quad(
        lambda t: 1.0 / math.sqrt(_radicand(t, target)),
        0.0,
        target,
        epsabs=tol,
        epsrel=tol,
        limit=200,
    )
    return value


def series_value(table: CensusTable, argument: float, terms: int = 50) -> float:
    """Evaluate sum_{n <= terms} h(n) * argument^(2n+1) in double precision.

    Convergence: h(n) <= Catalan(n) ~ 4^n gives radius >= 1/2, so 50 terms
    leave truncation error far below 1e-8 for arguments below 0.25.
    """
    if 2 * terms > table.weight_bound:
        raise TableRangeError(f"{terms} series terms need weight bound {2 * terms}")
    acc = 0.0
    sq = argument * argument
    for n in reversed(range(terms + 1)):
        acc = acc * sq + float(table.normalized_count(n))
    return acc * argument


# ---------------------------------------------------------------------------
# heuristic residual fit


def fit_residual_model(rows: Sequence[AsymptoticRow]) -> tuple[float, float, float]:
    """Ordinary least squares of delta against a*n + b*log(n) + c.

    Heuristic only: the model is suggested by the data, no error bars are
    claimed.  Needs at least 4 rows with distinct n.
    """
    ns = sorted({row.n for row in rows})
    if len(ns) < 4:
        raise ValueError(f"fit needs at least 4 distinct indices, got {len(ns)}")
    design = np.array([[row.n, math.log(row.n), 1.0] for row in rows])
    target = np.array([float(row.delta) for row in rows])
    coeffs, *_ = np.linalg.lstsq(design, target, rcond=None)
    return float(coeffs[0]), float(coeffs[1]), float(coeffs[2])


def estimate_linear_term(rows: Sequence[AsymptoticRow]) -> float:
    """The linear coefficient of the heuristic residual fit."""
    return fit_residual_model(rows)[0]


# ---------------------------------------------------------------------------
# row serialization (CSV and JSON share field names)


def format_real(x: mpmath.mpf) -> str:
    """Real number at the 9 significant digits used by all CLI output."""
    return mpmath.nstr(x, 9)


def rows_to_csv(rows: Sequence[AsymptoticRow]) -> str:
    lines = ["n,h,log_h,delta,delta_over_n"]
    for row in rows:
        lines.append(
            f"{row.n},{format_rational(row.h)},{format_real(row.log_h)},"
            f"{format_real(row.delta)},{format_real(row.delta_over_n)}"
        )
    return "\n".join(lines) + "\n"


def rows_to_json(rows: Sequence[AsymptoticRow]) -> str:
    records = [
        {
            "n": row.n,
            "h": format_rational(row.h),
            "log_h": float(format_real(row.log_h)),
            "delta": float(format_real(row.delta)),
            "delta_over_n": float(format_real(row.delta_over_n)),
        }
        for row in rows
    ]
    return json.dumps(records, indent=2) + "\n"
