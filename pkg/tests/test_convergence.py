import math

import numpy as np
import pytest

from wendland_kit.convergence import (
    CSV_HEADER,
    SweepRecord,
    error_fn,
    format_k,
    records_from_csv,
    records_to_csv,
    sup_error,
    sweep,
)
from wendland_kit.core import WendlandParams
from wendland_kit.scaling import ScaledKernel

# (d, k2, alpha) -> (epsilon, argmax_y) from tests/oracles/make_sup_oracle.py (10**6-point brute force)
DENSE_ORACLE = {
    (3, 2, 1.0): (0.017980280308353302, 0.43531843531843534),
    (3, 4, 1.0): (0.007390722623020318, 1.076953076953077),
    (3, 12, 1.0): (0.004735165853144041, 0.7536667536667537),
    (2, 1, 1.0): (0.033829380403368026, 0.38860838860838864),
    (2, 3, 1.0): (0.011599357915666408, 1.0448830448830448),
    (2, 11, 2.0): (0.005712863717957761, 0.5314294612573358),
}


def _eps(d, k2, alpha=1.0, **kw):
    return sup_error(ScaledKernel(WendlandParams(d, k2), alpha), **kw).epsilon


def test_error_fn_examples():
    ker = ScaledKernel.from_k(3, 1)
    assert error_fn(ker, 0.0) == 0.0
    y = ker.delta + 0.5
    assert error_fn(ker, y) == pytest.approx(-math.exp(-y * y), rel=1e-15)


@pytest.mark.parametrize("spot", sorted(DENSE_ORACLE))
def test_matches_dense_oracle(spot):
    eps, arg = DENSE_ORACLE[spot]
    rec = sup_error(ScaledKernel(WendlandParams(spot[0], spot[1]), spot[2]))
    assert rec.epsilon == pytest.approx(eps, rel=1e-4)
    assert rec.epsilon >= eps * (1 - 1e-12)  # refinement cannot undershoot a grid sample
    assert rec.argmax_y == pytest.approx(arg, abs=2e-5)


def test_coarse_ordering_integer_k():
    assert _eps(3, 100) < _eps(3, 10) < _eps(3, 2)


def test_coarse_ordering_half_integer_k():
    assert _eps(2, 99) < _eps(2, 11) < _eps(2, 1)


@pytest.mark.parametrize("d,k2", [(3, 2), (3, 9), (2, 1), (2, 20)])
def test_alpha_invariance(d, k2):
    a = sup_error(ScaledKernel(WendlandParams(d, k2), 1.0))
    b = sup_error(ScaledKernel(WendlandParams(d, k2), 4.0))
    assert b.epsilon == pytest.approx(a.epsilon, rel=1e-8)
    assert b.argmax_y == pytest.approx(a.argmax_y / 2, rel=1e-5)


@pytest.mark.parametrize("d,k2", [(3, 2), (2, 7), (3, 31)])
def test_doubling_coarse_grid_is_sound(d, k2):
    lo = _eps(d, k2, coarse_n=64)
    hi = _eps(d, k2, coarse_n=128)
    assert hi >= lo * (1 - 1e-6)


def test_coarse_n_minimum():
    with pytest.raises(ValueError):
        sup_error(ScaledKernel.from_k(3, 1), coarse_n=10)


def test_sweep_of_one_matches_sup_error():
    (rec,) = sweep(3, [2])
    assert rec == sup_error(ScaledKernel(WendlandParams(3, 2), 1.0))


def test_sweep_order_and_parallel_equivalence():
    serial = sweep(2, [5, 1, 3])
    assert [r.k2 for r in serial] == [1, 3, 5]
    assert sweep(2, [3, 5, 1], max_workers=3) == serial
    with pytest.raises(ValueError):
        sweep(2, [])


def test_sweep_full_range_finite():
    recs = sweep(3, range(2, 101, 2), max_workers=4)
    assert len(recs) == 50
    eps = np.array([r.epsilon for r in recs])
    assert np.all(np.isfinite(eps)) and np.all(eps > 0)
    assert not any(r.failed for r in recs)


def test_format_k():
    assert format_k(2) == "1"
    assert format_k(1) == "0.5"
    assert format_k(99) == "49.5"


def test_csv_round_trip():
    recs = sweep(2, [1, 4])
    text = records_to_csv(recs)
    assert text.splitlines()[0] == CSV_HEADER
    assert text.splitlines()[1] == "d,k,ell,alpha,epsilon,argmax_y"
    back = records_from_csv(text)
    for r, row in zip(recs, back):
        assert (row["d"], row["k2"], row["ell"]) == (r.d, r.k2, r.ell)
        assert row["epsilon"] == r.epsilon  # 17 significant digits are lossless
        assert row["argmax_y"] == r.argmax_y


def test_record_k_property():
    assert SweepRecord(2, 3, 3, 1.0, 0.1, 0.2, 64).k == 1.5
