"""Sup-norm distance between psi_{l,k} and its Gaussian limit.

``E(y) = psi(y) - exp(-alpha y^2)`` is searched on ``[0, max(delta, 6/sqrt(alpha))]``.
Beyond ``delta`` only the Gaussian remains, which is decreasing, and past
``6/sqrt(alpha)`` it is below 1e-15, so the search interval covers the sup.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .core import WendlandParams
from .scaling import ScaledKernel, gaussian, psi_eval

__all__ = [
    "SweepRecord",
    "error_fn",
    "sup_error",
    "sweep",
    "format_k",
    "records_to_csv",
    "records_from_csv",
    "CSV_HEADER",
]

log = logging.getLogger(__name__)

CSV_HEADER = "# wendland-kit v1"
_FIELDS = ("d", "k", "ell", "alpha", "epsilon", "argmax_y")
_REL_CHANGE = 1e-6
_MAX_GRID = 1 << 20


@dataclass(frozen=True)
class SweepRecord:
    d: int
    k2: int
    ell: int
    alpha: float
    epsilon: float
    argmax_y: float
    grid_points: int
    failed: bool = False
    message: str = ""

    @property
    def k(self) -> float:
        return self.k2 / 2


def error_fn(kernel: ScaledKernel, y):
    """psi(y) - exp(-alpha y^2)."""
    return psi_eval(kernel, y) - gaussian(kernel.alpha, y)


def _search_length(kernel: ScaledKernel) -> float:
    return max(kernel.delta, math.sqrt(36.0 / kernel.alpha))


def _refine(kernel: ScaledKernel, y: np.ndarray, absE: np.ndarray) -> tuple[float, float]:
    best_y = float(y[np.argmax(absE)])
    best = float(absE.max())
    f = lambda t: -abs(float(error_fn(kernel, t)))
    for i in range(1, len(y) - 1):
        if absE[i] > absE[i - 1] and absE[i] > absE[i + 1]:
            res = minimize_scalar(f, bracket=(y[i - 1], y[i], y[i + 1]), method="golden",
                                  options={"xtol": 1e-10})
            val = -float(res.fun)
            if val > best and y[i - 1] <= res.x <= y[i + 1]:
                best, best_y = val, float(res.x)
    return best, best_y


def _grid_estimate(kernel: ScaledKernel, n: int) -> tuple[float, float]:
    y = np.linspace(0.0, _search_length(kernel), n)
    absE = np.abs(error_fn(kernel, y))
    return _refine(kernel, y, absE)


def sup_error(kernel: ScaledKernel, coarse_n: int = 64) -> SweepRecord:
    """Estimate sup_{y >= 0} |E(y)| for one kernel.

    Local maxima of |E| on a uniform grid are polished by golden-section
    search; the grid is doubled until the estimate moves by less than a
    relative 1e-6.
    """
    if coarse_n < 64:
        raise ValueError(f"coarse_n must be at least 64, got {coarse_n}")
    n = coarse_n
    eps, arg = _grid_estimate(kernel, n)
    while n < _MAX_GRID:
        n *= 2
        eps2, arg2 = _grid_estimate(kernel, n)
        done = abs(eps2 - eps) <= _REL_CHANGE * eps2
        eps, arg = eps2, arg2
        if done:
            break
    p = kernel.params
    return SweepRecord(p.d, p.k2, p.ell, kernel.alpha, eps, arg, n)


def _one(d: int, k2: int, alpha: float, coarse_n: int) -> SweepRecord:
    try:
        return sup_error(ScaledKernel(WendlandParams(d, k2), alpha), coarse_n)
    except Exception as exc:  # keep the sweep going; the record carries the failure
        log.warning("sup_error failed for d=%s k2=%s alpha=%s: %s", d, k2, alpha, exc)
        ell = WendlandParams(d, k2).ell
        return SweepRecord(d, k2, ell, alpha, math.nan, math.nan, 0, failed=True, message=str(exc))


def sweep(d: int, k2_list: Sequence[int], alpha: float = 1.0, coarse_n: int = 64,
          max_workers: int | None = None) -> list[SweepRecord]:
    """One SweepRecord per entry of ``k2_list``, returned in ascending k2 order."""
    if not k2_list:
        raise ValueError("k2_list must be nonempty")
    ks = sorted(k2_list)
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers) as pool:
            return list(pool.map(lambda k2: _one(d, k2, alpha, coarse_n), ks))
    return [_one(d, k2, alpha, coarse_n) for k2 in ks]


def format_k(k2: int) -> str:
    return str(k2 // 2) if k2 % 2 == 0 else f"{k2 // 2}.5"


def _g(x: float) -> str:
    return format(x, ".17g")


def records_to_csv(records: Iterable[SweepRecord], out: io.TextIOBase | None = None) -> str:
    buf = out if out is not None else io.StringIO()
    buf.write(CSV_HEADER + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_FIELDS)
    for r in records:
        w.writerow([r.d, format_k(r.k2), r.ell, _g(r.alpha), _g(r.epsilon), _g(r.argmax_y)])
    return buf.getvalue() if out is None else ""


def records_from_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = []
    for row in csv.DictReader(lines):
        rows.append({
            "d": int(row["d"]),
            "k2": int(round(float(row["k"]) * 2)),
            "ell": int(row["ell"]),
            "alpha": float(row["alpha"]),
            "epsilon": float(row["epsilon"]),
            "argmax_y": float(row["argmax_y"]),
        })
    return rows


def record_dict(r: SweepRecord) -> dict:
    out = asdict(r)
    out["k"] = r.k
    return out
