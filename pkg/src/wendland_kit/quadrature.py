"""Gauss-Legendre rules computed by Newton iteration on P_m."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["gauss_legendre_nodes", "legendre_reference_rule"]


@lru_cache(maxsize=64)
def _reference_rule(m: int) -> tuple[np.ndarray, np.ndarray]:
    if m == 1:
        x, w = np.array([0.0]), np.array([2.0])
    else:
        # Tricomi initial guess for the roots, refined by Newton on the three-term recurrence.
        i = np.arange(1, m + 1)
        x = np.cos(np.pi * (i - 0.25) / (m + 0.5))
        for _ in range(100):
            p0 = np.ones_like(x)
            p1 = x.copy()
            for j in range(2, m + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = m * (x * p1 - p0) / (x * x - 1.0)
            dx = p1 / dp
            x = x - dx
            if np.max(np.abs(dx)) < 1e-15:
                break
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, m + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = m * (x * p1 - p0) / (x * x - 1.0)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
        order = np.argsort(x)
        x, w = x[order], w[order]
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def legendre_reference_rule(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the m-point rule on [-1, 1] (read-only, cached)."""
    if m < 1:
        raise ValueError(f"need at least one node, got m={m}")
    return _reference_rule(int(m))


def gauss_legendre_nodes(m: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """m-point Gauss-Legendre nodes and weights on [a, b].

    Exact for polynomials of degree up to 2m - 1.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    x, w = legendre_reference_rule(m)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w
