"""Command-line front end.

    wendland-kit eval     --d 3 --k 1 --alpha 1 --points 0,0.5,1
    wendland-kit coeffs   --d 3 --k 2
    wendland-kit fourier  --d 2 --k 3 --alpha 1 --z-max 5 --num 51
    wendland-kit converge --d 3 --alpha 1 --k-min 1 --k-max 50 --out eps.csv
    wendland-kit interp   --kernel all --franke-convention direct --delta-convention reduced

Exit status: 0 on success, 2 on argument errors, 1 on numerical failures.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .convergence import CSV_HEADER, format_k, record_dict, records_to_csv, sweep
from .core import WendlandParams, phi_poly_coeffs
from .errors import ConvergenceError, DomainError, UnsupportedParameterError
from .fourier import FourierSeriesSpec, ft_psi
from .interp import (
    FRANKE_CONVENTIONS,
    ExperimentConfig,
    NotPositiveDefiniteError,
    run_experiment,
)
from .scaling import DELTA_CONVENTIONS, ScaledKernel, gaussian, gaussian_ft, psi_eval

log = logging.getLogger("wendland_kit")


def parse_k2(text: str) -> int:
    """'2' -> 4, '2.5' -> 5; anything not a positive integer or half-integer is rejected."""
    try:
        k = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"k must be a decimal number, got {text!r}")
    k2 = 2 * k
    if k2.denominator != 1 or k2 <= 0:
        raise argparse.ArgumentTypeError(f"k must be a positive integer or half-integer, got {text!r}")
    return int(k2)


def _k_bound(text: str) -> Fraction:
    try:
        k = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a decimal number, got {text!r}")
    if (2 * k).denominator != 1 or k < 0:
        raise argparse.ArgumentTypeError(f"k bound must be a nonnegative multiple of 1/2, got {text!r}")
    return k


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _dimension(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals or any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("points must be a nonempty list of nonnegative numbers")
    return vals


def _k2_list(text: str) -> list[int]:
    return [parse_k2(t) for t in text.split(",") if t.strip()]


def _g(x: float) -> str:
    return format(float(x), ".17g")


def _json_value(v):
    # exact rationals stay strings; decimal text becomes a number
    if isinstance(v, str) and "/" not in v:
        try:
            return int(v)
        except ValueError:
            try:
                return float(v)
            except ValueError:
                return v
    return v


def _emit(args, columns: Sequence[str], rows: list[list], json_rows: list[dict] | None = None) -> None:
    if args.format == "json":
        payload = json_rows if json_rows is not None else [
            {c: _json_value(v) for c, v in zip(columns, r)} for r in rows
        ]
        text = json.dumps({"schema": "wendland-kit v1", "rows": payload}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_eval(args) -> None:
    ker = ScaledKernel(WendlandParams(args.d, args.k), args.alpha)
    ys = np.array(args.points)
    psi = np.atleast_1d(psi_eval(ker, ys))
    g = gaussian(args.alpha, ys)
    rows = [[_g(y), _g(p), _g(q), _g(p - q)] for y, p, q in zip(ys, psi, g)]
    _emit(args, ["y", "psi", "gaussian", "diff"], rows)


def cmd_coeffs(args) -> None:
    poly = phi_poly_coeffs(WendlandParams(args.d, args.k))
    rows = [[i, f"{c.numerator}/{c.denominator}"] for i, c in enumerate(poly.coefficients)]
    _emit(args, ["power", "coefficient"], rows)


def cmd_fourier(args) -> None:
    spec = FourierSeriesSpec(WendlandParams(args.d, args.k), args.alpha)
    zs = np.linspace(0.0, args.z_max, args.num) if args.points is None else np.array(args.points)
    rows = []
    for z in zs:
        f = ft_psi(spec, float(z))
        gz = float(gaussian_ft(args.d, args.alpha, z))
        rows.append([_g(z), _g(f), _g(gz), _g(f - gz)])
    _emit(args, ["z", "ft_psi", "gaussian_ft", "difference"], rows)


def cmd_converge(args) -> int:
    if args.k_min > args.k_max:
        raise argparse.ArgumentTypeError("--k-min must not exceed --k-max")
    parity = 1 if args.half_integers else 0
    k2s = [k2 for k2 in range(int(2 * args.k_min), int(2 * args.k_max) + 1) if k2 >= 1 and k2 % 2 == parity]
    if not k2s:
        raise argparse.ArgumentTypeError("no k values in the requested range")
    records = sweep(args.d, k2s, args.alpha, args.coarse_n, args.workers)
    if args.format == "json":
        _emit(args, [], [], [record_dict(r) for r in records])
    else:
        text = records_to_csv(records)
        if args.out:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    failed = [r for r in records if r.failed]
    for r in failed:
        print(f"error: d={r.d} k={format_k(r.k2)} alpha={r.alpha}: {r.message}", file=sys.stderr)
    return 1 if failed else 0


def cmd_interp(args) -> None:
    kernels = ("phi", "psi", "gauss") if args.kernel == "all" else (args.kernel,)
    cfg = ExperimentConfig(
        grid=args.grid,
        domain_length=args.domain_length,
        alpha=args.alpha,
        k2_values=tuple(args.k),
        kernels=kernels,
        franke_convention=args.franke_convention,
        delta_convention=args.delta_convention,
    )
    rows = run_experiment(cfg)
    cols = ["n", "kernel", "k", "l2_error", "linf_error", "cond_2", "lambda_min", "lambda_max"]
    f6 = lambda v: format(v, ".6g")
    out = [[r.n, r.kernel, r.k_label, f6(r.l2_error), f6(r.linf_error), f6(r.cond_2),
            f6(r.lambda_min), f6(r.lambda_max)] for r in rows]
    _emit(args, cols, out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wendland-kit", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("eval", parents=[common], help="psi, Gaussian and their difference at points y")
    p.add_argument("--d", type=_dimension, required=True)
    p.add_argument("--k", type=parse_k2, required=True, help="smoothness, integer or half-integer")
    p.add_argument("--alpha", type=_positive, default=1.0)
    p.add_argument("--points", type=_float_list, required=True, help="comma-separated y values")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("coeffs", parents=[common], help="exact coefficients of phi (integer k)")
    p.add_argument("--d", type=_dimension, required=True)
    p.add_argument("--k", type=parse_k2, required=True)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("fourier", parents=[common], help="Fourier transform of psi against the Gaussian's")
    p.add_argument("--d", type=_dimension, required=True)
    p.add_argument("--k", type=parse_k2, required=True)
    p.add_argument("--alpha", type=_positive, default=1.0)
    p.add_argument("--z-max", type=_positive, default=5.0)
    p.add_argument("--num", type=int, default=51)
    p.add_argument("--points", type=_float_list, default=None, help="explicit z values")
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("converge", parents=[common], help="sup-norm error sweep over k")
    p.add_argument("--d", type=_dimension, required=True)
    p.add_argument("--alpha", type=_positive, default=1.0)
    p.add_argument("--k-min", type=_k_bound, required=True)
    p.add_argument("--k-max", type=_k_bound, required=True)
    p.add_argument("--half-integers", action="store_true", help="sweep k = j + 1/2 instead of integers")
    p.add_argument("--coarse-n", type=int, default=64)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("interp", parents=[common], help="Franke interpolation benchmark")
    p.add_argument("--grid", type=int, default=9)
    p.add_argument("--domain-length", type=_positive, default=5.0)
    p.add_argument("--alpha", type=_positive, default=2.0)
    p.add_argument("--kernel", choices=("phi", "psi", "gauss", "all"), default="all")
    p.add_argument("--k", type=_k2_list, default=[2, 4, 6, 8, 10], help="comma-separated k values")
    p.add_argument("--franke-convention", choices=FRANKE_CONVENTIONS, default="scaled")
    p.add_argument("--delta-convention", choices=DELTA_CONVENTIONS, default="equal-area")
    p.set_defaults(func=cmd_interp)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        rc = args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except (UnsupportedParameterError, DomainError, ValueError) as exc:
        parser.error(f"{args.command}: {exc}")
    except (ConvergenceError, NotPositiveDefiniteError, ArithmeticError, np.linalg.LinAlgError) as exc:
        params = {k: v for k, v in vars(args).items() if k not in ("func",)}
        print(f"error: {args.command} failed for {params}: {exc}", file=sys.stderr)
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
