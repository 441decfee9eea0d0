"""Wendland compactly supported radial basis functions, their equal-area
rescaling, Fourier transforms, and convergence to the Gaussian."""

__version__ = "0.1.0"

from .core import (
    RationalPolynomial,
    WendlandParams,
    closed_form_oracle,
    derive_ell,
    phi_2f1,
    phi_area,
    phi_eval,
    phi_poly_coeffs,
    phi_zero,
)
from .scaling import ScaledKernel, delta, gaussian, gaussian_ft, psi_eval
from .fourier import FourierSeriesSpec, c_const, ft_phi, ft_psi
from .convergence import SweepRecord, error_fn, sup_error, sweep
