"""Wendland functions phi_{l,k} for integer ("original") and half-integer
("missing") smoothness.

Smoothness is carried as ``k2 = 2k`` so that the original/missing split is a
parity test. Three evaluation routes exist:

* integer k: exact rational polynomial, evaluated in the factored form
  ``(1 - r)^(l+k) * p(r)`` where ``p`` has low degree;
* half-integer k: Gauss-Legendre quadrature of the integral definition after
  the substitution ``s^2 = r^2 + (1 - r^2) u^2``;
* any k: the 2F1 representation, kept as a cross-check for r in [0.3, 1].
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, UnsupportedParameterError
from .quadrature import legendre_reference_rule
from .special_fn import HypSeriesParams, hyp_series

__all__ = [
    "WendlandParams",
    "RationalPolynomial",
    "derive_ell",
    "phi_poly_coeffs",
    "phi_eval",
    "phi_quadrature",
    "phi_2f1",
    "phi_zero",
    "phi_area",
    "closed_form_oracle",
    "ORIGINAL_CLOSED_FORMS",
    "TABULATED_CASES",
]


def derive_ell(d: int, k2: int) -> int:
    """Smallest exponent l = floor(d/2 + k) + 1 giving a positive definite function."""
    if d < 1 or k2 < 1:
        raise ValueError(f"need d >= 1 and k2 >= 1, got d={d}, k2={k2}")
    return (d + k2) // 2 + 1


@dataclass(frozen=True)
class WendlandParams:
    """Dimension ``d`` and doubled smoothness ``k2``; ``ell`` is derived."""

    d: int
    k2: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d!r}")
        if int(self.k2) != self.k2 or self.k2 < 1:
            raise ValueError(f"k2 must be a positive integer, got {self.k2!r}")

    @property
    def ell(self) -> int:
        return derive_ell(self.d, self.k2)

    @property
    def k(self) -> float:
        return self.k2 / 2

    @property
    def is_original(self) -> bool:
        return self.k2 % 2 == 0

    @classmethod
    def from_k(cls, d: int, k) -> "WendlandParams":
        """Build from k given as int, float, Fraction or decimal string ("2.5")."""
        k2 = Fraction(str(k)) * 2 if isinstance(k, (str, float)) else Fraction(k) * 2
        if k2.denominator != 1:
            raise ValueError(f"k must be an integer or half-integer, got {k!r}")
        return cls(d, int(k2))

    def __str__(self):
        k = str(self.k2 // 2) if self.is_original else f"{self.k2}/2"
        return f"phi_{{{self.ell},{k}}} (d={self.d})"


@dataclass(frozen=True)
class RationalPolynomial:
    """Polynomial with exact rational coefficients, ``coefficients[i]`` of r**i."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        c = [Fraction(v) for v in self.coefficients]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c) if c else (Fraction(0),))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, i):
        return self.coefficients[i]

    def __call__(self, r):
        """Float Horner evaluation (scalar or array)."""
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for c in reversed(self.float_coefficients):
            out = out * r + c
        return out if out.ndim else float(out)

    @cached_property
    def float_coefficients(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.coefficients)

    def exact(self, r) -> Fraction:
        r = Fraction(r)
        out = Fraction(0)
        for c in reversed(self.coefficients):
            out = out * r + c
        return out

    def __mul__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        out = [Fraction(0)] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return RationalPolynomial(tuple(out))

    def scale(self, factor) -> "RationalPolynomial":
        return RationalPolynomial(tuple(c * Fraction(factor) for c in self.coefficients))

    def divide_one_minus_r(self, times: int = 1) -> "RationalPolynomial":
        """Exact quotient by (1 - r)**times; raises if the division is not exact."""
        c = list(self.coefficients)
        for _ in range(times):
            # p(r) = (1 - r) q(r)  <=>  q_i = sum_{j <= i} p_j
            if sum(c) != 0:
                raise ArithmeticError("polynomial is not divisible by (1 - r)")
            q, acc = [], Fraction(0)
            for v in c[:-1]:
                acc += v
                q.append(acc)
            c = q
        return RationalPolynomial(tuple(c))

    def ratio_to(self, other: "RationalPolynomial") -> Fraction | None:
        """The rational ``t`` with ``self == t * other``, or None if not proportional."""
        if len(self) != len(other):
            return None
        t = None
        for a, b in zip(self.coefficients, other.coefficients):
            if b == 0:
                if a != 0:
                    return None
                continue
            if t is None:
                t = a / b
            elif a != t * b:
                return None
        return t

    @classmethod
    def one_minus_r_power(cls, m: int) -> "RationalPolynomial":
        return cls(tuple(Fraction(comb(m, i) * (-1) ** i) for i in range(m + 1)))


# Table of the original functions for d = 2, 3 (l = k + 2), up to a positive factor.
ORIGINAL_CLOSED_FORMS: dict[int, RationalPolynomial] = {
    k: RationalPolynomial.one_minus_r_power(2 * k + 2) * RationalPolynomial(tuple(map(Fraction, p)))
    for k, p in {
        1: (1, 4),
        2: (3, 18, 35),
        3: (1, 8, 25, 32),
        4: (5, 50, 210, 450, 429),
    }.items()
}


@lru_cache(maxsize=256)
def _poly_coeffs(ell: int, k: int) -> RationalPolynomial:
    coeffs = [Fraction(0)] * (ell + 2 * k + 1)
    # int_r^1 s (1-s)^l (s^2-r^2)^(k-1) ds, both powers binomially expanded;
    # each s^(1+i+2j) term integrates to (1 - r^(2+i+2j)) / (2+i+2j).
    for i in range(ell + 1):
        bi = comb(ell, i) * (-1) ** i
        for j in range(k):
            c = Fraction(bi * comb(k - 1, j) * (-1) ** (k - 1 - j), 2 + i + 2 * j)
            coeffs[2 * (k - 1 - j)] += c
            coeffs[2 * k + i] -= c
    norm = Fraction(1, math.factorial(k - 1) * 2 ** (k - 1))
    return RationalPolynomial(tuple(c * norm for c in coeffs))


def phi_poly_coeffs(p: WendlandParams) -> RationalPolynomial:
    """Exact coefficients of phi_{l,k} on [0, 1] for integer k."""
    if not p.is_original:
        raise UnsupportedParameterError(
            f"exact polynomial form needs integer k, got k={p.k2}/2"
        )
    return _poly_coeffs(p.ell, p.k2 // 2)


@lru_cache(maxsize=256)
def _factored(ell: int, k: int) -> tuple[int, RationalPolynomial]:
    """phi = (1 - r)^m * q(r); returns (m, q) with the largest exact m."""
    poly = _poly_coeffs(ell, k)
    m = 0
    while sum(poly.coefficients) == 0 and poly.degree > 0:
        poly = poly.divide_one_minus_r()
        m += 1
    return m, poly


def phi_zero(ell: int, k2: int) -> float:
    """phi_{l,k}(0) = Gamma(l+1) Gamma(2k) / (2^(k-1) Gamma(k) Gamma(l+2k+1))."""
    k = k2 / 2
    return math.exp(
        math.lgamma(ell + 1) + math.lgamma(2 * k) - (k - 1) * math.log(2)
        - math.lgamma(k) - math.lgamma(ell + 2 * k + 1)
    )


def phi_area(ell: int, k2: int) -> float:
    """Integral of phi_{l,k} over [0, inf): 2^k Gamma(l+1) Gamma(k+1) / Gamma(l+2k+2)."""
    k = k2 / 2
    return math.exp(
        k * math.log(2) + math.lgamma(ell + 1) + math.lgamma(k + 1) - math.lgamma(ell + 2 * k + 2)
    )


_QUAD_START = 64
_QUAD_MAX = 4096
_QUAD_RTOL = 1e-12
_CHUNK = 2048


def _graded_quad(ell: int, k2: int, r: np.ndarray, m: int) -> np.ndarray:
    k = k2 / 2
    # Integrand after s^2 = r^2 + (1 - r^2) u^2; near u = 0 it varies on the
    # scale r, so [0, 1] is split at r, 2r, 4r, ... to keep each panel analytic
    # in a disc comparable to its length.
    rmin = max(float(r.min()), 2.0**-70)
    n_panels = min(64, 1 + max(0, math.ceil(-math.log2(rmin))))
    edges = np.minimum(1.0, r[:, None] * 2.0 ** np.arange(n_panels)[None, :])
    edges = np.concatenate([np.zeros((r.size, 1)), edges, np.ones((r.size, 1))], axis=1)
    lo, hi = edges[:, :-1], edges[:, 1:]
    x, w = legendre_reference_rule(m)
    half = 0.5 * (hi - lo)
    u = lo[..., None] + half[..., None] * (x + 1.0)
    r2 = (r * r)[:, None, None]
    one_m_r2 = ((1.0 - r) * (1.0 + r))[:, None, None]
    s = np.sqrt(r2 + one_m_r2 * u * u)
    # 1 - s = (1 - r^2)(1 - u^2) / (1 + s), free of cancellation as r -> 1
    f = (one_m_r2 * (1.0 - u) * (1.0 + u) / (1.0 + s)) ** ell
    if k2 != 1:
        f = f * u ** (k2 - 1)
    vals = np.einsum("ijk,k->ij", f, w) * half
    pref = math.exp(-math.lgamma(k) - (k - 1) * math.log(2))
    return pref * ((1.0 - r) * (1.0 + r)) ** k * vals.sum(axis=1)


def phi_quadrature(p: WendlandParams, r) -> np.ndarray:
    """phi_{l,k}(r) by node-doubling Gauss-Legendre quadrature, any k.

    Doubles the per-panel node count from 64 until successive values agree to
    a relative 1e-12.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.zeros_like(r)
    inside = (r > 0) & (r < 1)
    out[r == 0] = phi_zero(p.ell, p.k2)
    idx = np.flatnonzero(inside)
    for start in range(0, idx.size, _CHUNK):
        sel = idx[start:start + _CHUNK]
        rr = r[sel]
        m = _QUAD_START
        prev = _graded_quad(p.ell, p.k2, rr, m)
        while True:
            m *= 2
            cur = _graded_quad(p.ell, p.k2, rr, m)
            if np.all(np.abs(cur - prev) <= _QUAD_RTOL * np.abs(cur)):
                break
            if m >= _QUAD_MAX:
                raise ConvergenceError(f"quadrature for {p} did not settle at {m} nodes")
            prev = cur
        out[sel] = cur
    return out


def _phi_poly_eval(p: WendlandParams, r: np.ndarray) -> np.ndarray:
    m, q = _factored(p.ell, p.k2 // 2)
    rc = np.clip(r, 0.0, 1.0)
    return np.where(r < 1.0, (1.0 - rc) ** m * q(rc), 0.0)


def phi_eval(p: WendlandParams, r):
    """phi_{l,k}(r) for r >= 0; zero for r >= 1.

    Integer k uses the exact polynomial, half-integer k the quadrature route.
    Accepts scalars or arrays and returns the same shape.
    """
    arr = np.asarray(r, dtype=float)
    flat = np.atleast_1d(arr).ravel()
    if np.any(flat < 0):
        raise ValueError("phi_eval needs r >= 0")
    if p.is_original:
        out = _phi_poly_eval(p, flat)
    else:
        out = phi_quadrature(p, flat)
    out = np.maximum(out, 0.0)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def phi_2f1(p: WendlandParams, r: float, rel_tol: float = 1e-16) -> float:
    """phi_{l,k}(r) from its 2F1 representation in the argument 1 - r^2.

    Convergence is only algebraic as r -> 0, so this is meant for r away from
    the origin.
    """
    if r >= 1:
        return 0.0
    ell, k = p.ell, p.k
    x = 1.0 - r * r
    pref = math.exp(math.lgamma(ell + 1) - (ell + k) * math.log(2) - math.lgamma(ell + k + 1))
    f = hyp_series(HypSeriesParams((ell / 2, (ell + 1) / 2), (ell + k + 1,), x,
                                   rel_tol=rel_tol, max_terms=10_000_000))
    return pref * x ** (ell + k) * f


TABULATED_CASES: tuple[tuple[int, int], ...] = (
    (2, 2), (2, 4), (2, 6), (2, 8),
    (3, 2), (3, 4), (3, 6), (3, 8),
    (2, 1), (2, 3), (2, 5),
)


_ORACLE_DIGITS = 60


def closed_form_oracle(p: WendlandParams, r: float) -> float:
    """Tabulated closed forms, defined only up to a positive constant factor.

    The missing cases cancel heavily towards r = 1, so they are evaluated in
    60-digit decimal arithmetic before rounding back to float.
    """
    if (p.d, p.k2) not in TABULATED_CASES:
        raise UnsupportedParameterError(f"no tabulated closed form for d={p.d}, k2={p.k2}")
    if r >= 1:
        return 0.0
    if p.is_original:
        return float(ORIGINAL_CLOSED_FORMS[p.k2 // 2].exact(Fraction(r)))
    with decimal.localcontext() as ctx:
        ctx.prec = _ORACLE_DIGITS
        rd = Decimal(r)
        r2 = rd * rd
        S = (1 - r2).sqrt()
        # r^2 L(r) -> 0 as r -> 0, so every log term is dropped at the origin.
        L = (rd / (1 + S)).ln() if r > 0 else Decimal(0)
        if p.k2 == 1:
            v = 3 * r2 * L + (2 * r2 + 1) * S
        elif p.k2 == 3:
            v = -15 * r2 * r2 * (6 + r2) * L - (81 * r2 * r2 + 28 * r2 - 4) * S
        else:
            r4 = r2 * r2
            r6, r8 = r4 * r2, r4 * r4
            v = (945 * r8 + 2520 * r6) * L + (256 * r8 + 2639 * r6 + 690 * r4 - 136 * r2 + 16) * S
        return float(v)


def poly_coefficients_as_strings(coeffs: Sequence[Fraction]) -> list[str]:
    return [f"{c.numerator}/{c.denominator}" for c in coeffs]
