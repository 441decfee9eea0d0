import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import raw_area, raw_phi
from wendland_kit.core import (
    ORIGINAL_CLOSED_FORMS,
    TABULATED_CASES,
    RationalPolynomial,
    WendlandParams,
    closed_form_oracle,
    derive_ell,
    phi_2f1,
    phi_area,
    phi_eval,
    phi_poly_coeffs,
    phi_quadrature,
    phi_zero,
)
from wendland_kit.errors import UnsupportedParameterError


@pytest.mark.parametrize("d,k2,ell", [(3, 2, 3), (2, 1, 2), (1, 2, 2), (2, 2, 3), (3, 1, 3), (5, 7, 7)])
def test_derive_ell(d, k2, ell):
    assert derive_ell(d, k2) == ell
    assert WendlandParams(d, k2).ell == ell


def test_params_validation_and_from_k():
    assert WendlandParams.from_k(2, "2.5").k2 == 5
    assert WendlandParams.from_k(3, 1).k2 == 2
    with pytest.raises(ValueError):
        WendlandParams.from_k(2, "1.3")
    with pytest.raises(ValueError):
        WendlandParams(0, 2)
    with pytest.raises(ValueError):
        WendlandParams(2, 0)


def test_poly_coeffs_d3_k1_exact():
    poly = phi_poly_coeffs(WendlandParams(3, 2))
    expected = tuple(Fraction(c, 20) for c in (1, 0, -10, 20, -15, 4))
    assert poly.coefficients == expected
    assert poly.ratio_to(ORIGINAL_CLOSED_FORMS[1]) == Fraction(1, 20)


def test_poly_constant_term_is_phi_zero():
    for d in (1, 2, 3, 4):
        for k in range(1, 7):
            p = WendlandParams(d, 2 * k)
            assert float(phi_poly_coeffs(p)[0]) == pytest.approx(phi_zero(p.ell, p.k2), rel=1e-13)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("d", [2, 3])
def test_poly_coeffs_match_table(d, k):
    poly = phi_poly_coeffs(WendlandParams(d, 2 * k))
    assert poly.degree == WendlandParams(d, 2 * k).ell + 2 * k
    t = poly.ratio_to(ORIGINAL_CLOSED_FORMS[k])
    assert t is not None and t > 0


def test_poly_coeffs_rejects_half_integer():
    with pytest.raises(UnsupportedParameterError):
        phi_poly_coeffs(WendlandParams(2, 3))


def test_rational_polynomial_division():
    p = RationalPolynomial.one_minus_r_power(3) * RationalPolynomial((Fraction(2), Fraction(5)))
    assert p.divide_one_minus_r(3).coefficients == (2, 5)
    with pytest.raises(ArithmeticError):
        RationalPolynomial((Fraction(1), Fraction(1))).divide_one_minus_r()


def test_phi_eval_examples():
    assert phi_eval(WendlandParams(3, 2), 0.5) == pytest.approx(0.009375, rel=1e-14)
    for p in (WendlandParams(3, 2), WendlandParams(2, 1), WendlandParams(4, 9)):
        assert phi_eval(p, 1.7) == 0.0
        assert phi_eval(p, 1.0) == 0.0
    assert phi_eval(WendlandParams(2, 1), 1.0) == 0.0


def test_phi_eval_array_shape():
    r = np.linspace(0, 1.2, 12).reshape(3, 4)
    for p in (WendlandParams(3, 4), WendlandParams(2, 3)):
        out = phi_eval(p, r)
        assert out.shape == r.shape
        assert out[0, 0] == pytest.approx(phi_zero(p.ell, p.k2), rel=1e-12)


def test_phi_zero_examples():
    assert phi_zero(3, 2) == pytest.approx(0.05, rel=1e-14)
    assert phi_zero(4, 4) == pytest.approx(1 / 560, rel=1e-14)
    assert phi_zero(2, 1) == pytest.approx(2 * math.sqrt(2) / (6 * math.sqrt(math.pi)), rel=1e-14)
    assert phi_zero(3, 2) == pytest.approx(raw_phi(3, 2, 0.0), abs=1e-14)


def test_phi_area_examples():
    assert phi_area(3, 2) == pytest.approx(1 / 60, rel=1e-14)
    assert phi_area(4, 4) == pytest.approx(1 / 1890, rel=1e-14)
    assert phi_area(4, 4) == pytest.approx(raw_area(4, 4), rel=1e-10)
    half = math.sqrt(2) * 2 * (math.sqrt(math.pi) / 2) / 24
    assert phi_area(2, 1) == pytest.approx(half, rel=1e-14)
    assert phi_area(2, 1) == pytest.approx(raw_area(2, 1), abs=1e-12)


def test_closed_form_examples():
    assert closed_form_oracle(WendlandParams(3, 2), 0.0) == 1.0
    assert closed_form_oracle(WendlandParams(2, 1), 1.0) == 0.0
    r = 0.5
    L = math.log(1 / (2 + math.sqrt(3)))
    expected = 3 * 0.25 * L + 1.5 * math.sqrt(3) / 2
    assert closed_form_oracle(WendlandParams(2, 1), r) == pytest.approx(expected, rel=1e-14)
    with pytest.raises(UnsupportedParameterError):
        closed_form_oracle(WendlandParams(5, 2), 0.3)


@pytest.mark.parametrize("d,k2", TABULATED_CASES)
def test_paths_agree_with_closed_forms(d, k2):
    p = WendlandParams(d, k2)
    ratios = []
    for r in np.linspace(0, 1, 50):
        o = closed_form_oracle(p, float(r))
        if abs(o) < 1e-12:
            continue
        ratios.append(phi_eval(p, float(r)) / o)
    ratios = np.array(ratios)
    assert np.all(ratios > 0)
    assert np.max(np.abs(ratios / ratios[0] - 1)) < 1e-9


@pytest.mark.parametrize("d,k2", [(1, 2), (2, 4), (3, 6), (3, 10), (5, 8)])
def test_polynomial_matches_raw_integral(d, k2):
    p = WendlandParams(d, k2)
    for r in np.arange(10) / 10:
        assert phi_eval(p, float(r)) == pytest.approx(raw_phi(p.ell, k2, float(r)), abs=1e-11)


@pytest.mark.parametrize("d,k2", [(2, 1), (2, 3), (1, 5), (3, 7), (4, 11)])
def test_half_integer_quadrature_matches_raw_integral(d, k2):
    p = WendlandParams(d, k2)
    for r in (0.0, 0.05, 0.3, 0.7, 0.95):
        assert phi_eval(p, r) == pytest.approx(raw_phi(p.ell, k2, r), rel=1e-9, abs=1e-14)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_phi_positive_and_peaked_at_origin(d):
    r = np.linspace(0, 1, 201)[:-1]
    for k2 in range(1, 21):
        p = WendlandParams(d, k2)
        v = phi_eval(p, r)
        assert np.all(v > 0)
        assert np.all(v <= phi_zero(p.ell, k2) * (1 + 1e-12))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_2f1_route_agrees(d):
    for k2 in range(1, 12):
        p = WendlandParams(d, k2)
        for r in np.linspace(0.3, 0.99, 15):
            a = phi_2f1(p, float(r))
            b = phi_eval(p, float(r))
            assert a == pytest.approx(b, rel=1e-9)
        assert phi_2f1(p, 1.0) == 0.0


def test_quadrature_route_reproduces_polynomial():
    r = np.linspace(0.001, 0.999, 40)
    for p in (WendlandParams(3, 2), WendlandParams(2, 8), WendlandParams(3, 40)):
        np.testing.assert_allclose(phi_quadrature(p, r), phi_eval(p, r), rtol=1e-11)


def test_large_k_stays_stable_near_support_edge():
    # the expanded polynomial cancels catastrophically here; the factored form must not
    p = WendlandParams(3, 100)
    r = np.array([0.2, 0.6, 0.95, 0.999])
    np.testing.assert_allclose(phi_eval(p, r), phi_quadrature(p, r), rtol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 16), st.floats(0.0, 0.999))
def test_phi_decreasing_in_r(d, k2, r):
    p = WendlandParams(d, k2)
    assert phi_eval(p, min(r + 1e-3, 1.0)) <= phi_eval(p, r)
