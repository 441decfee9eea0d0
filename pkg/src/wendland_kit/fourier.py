"""Radial Fourier transforms of phi_{l,k} and psi_{l,k}.

The transform of phi is a constant times a 1F2 series in ``-z^2/4``. For
large ``delta * z`` the alternating terms grow far beyond the final value; the
series is then re-summed in decimal arithmetic with enough digits to absorb
the cancellation.
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .core import WendlandParams
from .errors import ConvergenceError
from .scaling import ScaledKernel
from .special_fn import HypSeriesParams, hyp_series_detail

__all__ = [
    "FourierSeriesSpec",
    "c_const",
    "ft_phi",
    "ft_psi",
    "ft_psi_series",
    "log_weight",
    "weight",
    "majorant",
    "CANCELLATION_LIMIT",
]

# Double-precision sums whose largest partial sum exceeds the result by more
# than this factor are redone in decimal arithmetic.
CANCELLATION_LIMIT = 1e3
_GUARD_DIGITS = 25


@dataclass(frozen=True)
class FourierSeriesSpec:
    """Transform settings. ``d`` is the transform dimension; it defaults to
    ``params.d`` but may differ, since phi_{l,k} itself does not depend on d."""

    params: WendlandParams
    alpha: float = 1.0
    d: int | None = None
    rel_tol: float = 1e-16
    max_terms: int = 20_000

    def __post_init__(self):
        if self.d is None:
            object.__setattr__(self, "d", self.params.d)
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 8:
            raise ValueError("max_terms must be at least 8")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    @property
    def kernel(self) -> ScaledKernel:
        return ScaledKernel(self.params, self.alpha)


def c_const(d: int, ell: int, k2: int) -> float:
    """2^(k+d/2) Gamma(l+1) Gamma((d+1)/2+k) / (sqrt(pi) Gamma(l+d+2k+1))."""
    k = k2 / 2
    return math.exp(
        (k + d / 2) * math.log(2) + math.lgamma(ell + 1) + math.lgamma((d + 1) / 2 + k)
        - 0.5 * math.log(math.pi) - math.lgamma(ell + d + 2 * k + 1)
    )


def _1f2_params(d: int, ell: int, k: float) -> tuple[float, float, float]:
    return (d + 1) / 2 + k, (ell + d + 1) / 2 + k, (ell + d + 2) / 2 + k


def _decimal_1f2(a: float, b1: float, b2: float, z: float, digits: int, max_terms: int) -> tuple[Decimal, Decimal]:
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        da, db1, db2 = Decimal(a), Decimal(b1), Decimal(b2)
        x = -(Decimal(z) ** 2) / 4
        term = Decimal(1)
        total = Decimal(1)
        biggest = Decimal(1)
        eps = Decimal(10) ** (-(digits - 2))
        small_run = 0
        for n in range(max_terms):
            term = term * (da + n) / ((db1 + n) * (db2 + n) * (n + 1)) * x
            total += term
            biggest = max(biggest, abs(total))
            if abs(term) <= eps * abs(total):
                small_run += 1
                if small_run >= 2:
                    return +total, biggest
            else:
                small_run = 0
    raise ConvergenceError(f"1F2({a}; {b1}, {b2}; -{z}^2/4) not converged in {max_terms} terms")


def _series_1f2(a: float, b1: float, b2: float, z: float, rel_tol: float, max_terms: int) -> float:
    res = hyp_series_detail(HypSeriesParams((a,), (b1, b2), -z * z / 4, rel_tol=rel_tol, max_terms=max_terms))
    if res.cancellation <= CANCELLATION_LIMIT:
        return res.value
    # Size the working precision from the observed cancellation; retry with
    # more digits if the true value turns out smaller than the estimate.
    lost = math.log10(res.max_abs_partial) - math.log10(abs(res.value)) if res.value else 30.0
    digits = _GUARD_DIGITS + max(0, math.ceil(lost))
    for _ in range(8):
        val, biggest = _decimal_1f2(a, b1, b2, z, digits, max_terms)
        if val == 0:
            digits *= 2
            continue
        lost = (biggest / abs(val)).log10()
        if lost + 20 < digits:
            return float(val)
        digits = _GUARD_DIGITS + int(lost) + 10
    raise ConvergenceError(f"1F2({a}; {b1}, {b2}; -{z}^2/4): cancellation not resolved")


def ft_phi(spec: FourierSeriesSpec, z: float) -> float:
    """d-dimensional radial Fourier transform of phi_{l,k} at z >= 0."""
    if z < 0:
        raise ValueError("z must be nonnegative")
    p = spec.params
    c = c_const(spec.d, p.ell, p.k2)
    if z == 0:
        return c
    a, b1, b2 = _1f2_params(spec.d, p.ell, p.k)
    return c * _series_1f2(a, b1, b2, float(z), spec.rel_tol, spec.max_terms)


def ft_psi(spec: FourierSeriesSpec, z: float) -> float:
    """Radial Fourier transform of psi_{l,k}: delta^d / phi(0) * ft_phi(delta z)."""
    ker = spec.kernel
    return ker.delta ** spec.d * ker.norm_factor * ft_phi(spec, ker.delta * z)


def log_weight(spec: FourierSeriesSpec, n: int) -> float:
    """log w_n(k) of the series ft_psi(z) = 2^(-d/2) sum_n w_n (-z^2/4)^n.

    Every w_n is positive, so the sign of the n-th term is (-1)^n.
    """
    p = spec.params
    d, ell, k = spec.d, p.ell, p.k
    dl = spec.kernel.delta
    return (
        math.lgamma(d + 2 * k + 2 * n) + math.lgamma(ell + 2 * k + 1) + math.lgamma(k)
        - math.lgamma(2 * k) - math.lgamma(ell + 2 * k + 1 + d + 2 * n) - math.lgamma(k + d / 2 + n)
        + (d + 2 * n) * math.log(dl) - math.lgamma(n + 1)
    )


def weight(spec: FourierSeriesSpec, n: int) -> float:
    return math.exp(log_weight(spec, n))


def majorant(d: int, alpha: float, n: int) -> float:
    """U_n = (6/alpha)^(d/2 + n) / n!, a bound on w_n(k) valid for k >= 1."""
    return math.exp((d / 2 + n) * math.log(6 / alpha) - math.lgamma(n + 1))


def ft_psi_series(spec: FourierSeriesSpec, z: float) -> float:
    """ft_psi summed directly from the w_n series.

    For k >= 1 the sum stops once the current term plus the majorant tail
    sum_{m>n} U_m (z^2/4)^m falls below ``rel_tol`` times the partial sum. No
    majorant is available for k = 1/2; there the two-small-terms rule is used.
    """
    d = spec.d
    pref = 2.0 ** (-d / 2)
    if z == 0:
        return pref * weight(spec, 0)
    x = z * z / 4
    p = spec.params
    k, ell = p.k, p.ell
    # log w_0 once from gammas, then the exact term ratio; per-term lgamma
    # rounding would otherwise be amplified by the alternating cancellation.
    log_wx = log_weight(spec, 0)
    log_step = math.log(x) + 2 * math.log(spec.kernel.delta)
    use_majorant = spec.params.k2 >= 2
    log_u0 = (d / 2) * math.log(6 / spec.alpha)
    rho = 6 * x / spec.alpha

    total, comp = 0.0, 0.0
    small_run = 0
    for n in range(spec.max_terms):
        if n:
            m = n - 1
            log_wx += log_step + math.log(
                (d + 2 * k + 2 * m) * (d + 2 * k + 2 * m + 1)
                / ((ell + 2 * k + 1 + d + 2 * m) * (ell + 2 * k + 2 + d + 2 * m) * (k + d / 2 + m) * n)
            )
        mag = math.exp(log_wx)
        term = mag if n % 2 == 0 else -mag
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        s = abs(total + comp)
        if use_majorant:
            ratio = rho / (n + 2)
            if ratio < 1:
                log_next = log_u0 + (n + 1) * math.log(rho) - math.lgamma(n + 2)
                tail = math.exp(log_next) / (1 - ratio)
                if mag + tail <= spec.rel_tol * s:
                    return pref * (total + comp)
        elif mag <= spec.rel_tol * s:
            small_run += 1
            if small_run >= 2:
                return pref * (total + comp)
        else:
            small_run = 0
    raise ConvergenceError(f"w_n series for {spec.params} at z={z} not converged")


def ft_psi_grid(spec: FourierSeriesSpec, z) -> np.ndarray:
    return np.array([ft_psi(spec, float(v)) for v in np.atleast_1d(z)])
