"""Scalar special functions: log-gamma, gamma ratios, Pochhammer symbols and
a truncation-controlled generalised hypergeometric series.

Everything here works on plain Python floats. Gamma values are always
handled in log space so that normalisation constants for smoothness
parameters in the tens stay representable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConvergenceError, DomainError

__all__ = [
    "log_gamma",
    "gamma_ratio",
    "pochhammer",
    "HypSeriesParams",
    "HypSeriesResult",
    "hyp_series",
    "hyp_series_detail",
]

_DIRECT_POCHHAMMER_MAX = 64


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def gamma_ratio(x: float, eta: float) -> float:
    """Gamma(x + eta) / Gamma(x), evaluated as a difference of log-gammas."""
    if not (x > 0 and eta > 0):
        raise DomainError(f"gamma_ratio requires x > 0 and eta > 0, got x={x!r}, eta={eta!r}")
    return math.exp(math.lgamma(x + eta) - math.lgamma(x))


def pochhammer(c: float, n: int) -> float:
    """Rising factorial (c)_n = c (c+1) ... (c+n-1), with (c)_0 = 1."""
    if n < 0:
        raise DomainError(f"pochhammer requires n >= 0, got {n!r}")
    if n > _DIRECT_POCHHAMMER_MAX and c > 0:
        return gamma_ratio(c, n)
    out = 1.0
    for i in range(n):
        out *= c + i
        if out == 0.0:
            break
    return out


def _is_nonpositive_integer(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


@dataclass(frozen=True)
class HypSeriesParams:
    """Parameters of pFq(a_1..a_p; b_1..b_q; x) plus truncation controls."""

    numerator_params: Sequence[float]
    denominator_params: Sequence[float]
    argument: float
    rel_tol: float = 1e-15
    max_terms: int = 100_000

    def __post_init__(self):
        object.__setattr__(self, "numerator_params", tuple(float(a) for a in self.numerator_params))
        object.__setattr__(self, "denominator_params", tuple(float(b) for b in self.denominator_params))
        for b in self.denominator_params:
            if _is_nonpositive_integer(b):
                raise DomainError(f"denominator parameter {b} is zero or a negative integer")
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")

    @property
    def terminating(self) -> bool:
        return any(_is_nonpositive_integer(a) for a in self.numerator_params)


@dataclass
class HypSeriesResult:
    value: float
    n_terms: int
    max_abs_partial: float = field(default=0.0)

    @property
    def cancellation(self) -> float:
        """Ratio of the largest partial-sum magnitude to the final magnitude."""
        if self.value == 0.0:
            return math.inf if self.max_abs_partial > 0 else 1.0
        return self.max_abs_partial / abs(self.value)


def hyp_series_detail(params: HypSeriesParams) -> HypSeriesResult:
    """Sum the series and report term count and cancellation diagnostics.

    Terms are generated by the ratio recurrence and accumulated with
    Neumaier compensated summation. The series stops once two consecutive
    terms are each at most ``rel_tol`` times the partial sum, or exactly when
    a numerator Pochhammer factor reaches zero.
    """
    a = params.numerator_params
    b = params.denominator_params
    x = params.argument
    p, q = len(a), len(b)

    if p > q + 1:
        raise DomainError("series with p > q + 1 diverges for x != 0")
    if p == q + 1 and not params.terminating:
        if abs(x) > 1 or (abs(x) == 1 and not (x == 1 and sum(b) - sum(a) > 0)):
            raise DomainError(
                f"pFq with p = q + 1 needs |x| < 1, or x = 1 with sum(b) - sum(a) > 0; got x={x}"
            )

    term = 1.0
    total, comp = 1.0, 0.0
    max_partial = 1.0
    small_run = 0
    for n in range(params.max_terms):
        num = 1.0
        for ai in a:
            num *= ai + n
        if num == 0.0:
            return HypSeriesResult(total + comp, n + 1, max_partial)
        den = float(n + 1)
        for bi in b:
            den *= bi + n
        term *= num / den * x

        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        s = total + comp
        max_partial = max(max_partial, abs(s))

        if abs(term) <= params.rel_tol * abs(s):
            small_run += 1
            if small_run >= 2:
                return HypSeriesResult(s, n + 2, max_partial)
        else:
            small_run = 0
    raise ConvergenceError(
        f"hypergeometric series not converged after {params.max_terms} terms "
        f"(a={a}, b={b}, x={x})"
    )


def hyp_series(params: HypSeriesParams) -> float:
    """Partial sum of the generalised hypergeometric series."""
    return hyp_series_detail(params).value
