import math

import numpy as np
import pytest

from osgt_dp import calibrate, dist
from osgt_dp.account import gaussian_delta, osgt_delta
from osgt_dp.calibrate import CalibrationTarget
from osgt_dp.dist import OsgtParams
from osgt_dp.errors import CalibrationError, DomainError
from osgt_dp.mech import Sensitivity


def _envelope(n=50, seed=2024):
    """Random (m, sigma2, Delta, target) with m/sigma in [0, 1] and Delta/sigma in [0.05, 1]."""
    rs = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        s2 = float(10 ** rs.uniform(0, 3))
        sigma = math.sqrt(s2)
        out.append((float(rs.uniform(0, 1)) * sigma, s2, float(rs.uniform(0.05, 1)) * sigma,
                    float(10 ** rs.uniform(-14, -3))))
    return out


ENVELOPE = _envelope()


@pytest.mark.parametrize("m,s2,d,target", ENVELOPE)
def test_epsilon_round_trip(m, s2, d, target):
    p = OsgtParams(m, s2)
    eps = calibrate.epsilon_for_delta(p, d, target)
    assert eps > 0
    assert osgt_delta(p, d, eps).delta == pytest.approx(target, rel=1e-6)


@pytest.mark.parametrize("m,s2,d,target", ENVELOPE)
def test_sigma2_round_trip(m, s2, d, target):
    eps = calibrate.epsilon_for_delta(OsgtParams(m, s2), d, target)
    got = calibrate.sigma2_for_target(m, d, eps, target)
    assert osgt_delta(OsgtParams(m, got), d, eps).delta == pytest.approx(target, rel=1e-6)
    assert got == pytest.approx(s2, rel=1e-6)


def test_reference_point_round_trip():
    target = osgt_delta(OsgtParams(3.0, 40.0), 1.0, 1.0).delta
    assert calibrate.sigma2_for_target(3.0, 1.0, 1.0, target) == pytest.approx(40.0, rel=1e-8)


def test_m_zero_matches_gaussian_calibration():
    a = calibrate.sigma2_for_target(0.0, 1.0, 0.5, 1e-6)
    b = calibrate.gaussian_sigma2_for_target(1.0, 0.5, 1e-6)
    assert a == pytest.approx(b, rel=1e-9)
    assert gaussian_delta(b, 1.0, 0.5).delta == pytest.approx(1e-6, rel=1e-6)


def test_tighter_delta_needs_more_noise():
    prev = 0.0
    for target in (1e-4, 1e-5, 1e-6, 1e-7, 1e-8):
        s2 = calibrate.sigma2_for_target(3.0, 1.0, 1.0, target)
        assert s2 > prev
        prev = s2


def test_epsilon_nonincreasing_in_sigma2():
    eps = [calibrate.epsilon_for_delta(OsgtParams(3.0, s2), 1.0, 1e-8) for s2 in (10, 20, 40, 80, 160)]
    assert all(b <= a for a, b in zip(eps, eps[1:]))


def test_epsilon_zero_when_target_is_loose():
    p = OsgtParams(3.0, 40.0)
    assert calibrate.epsilon_for_delta(p, 1.0, 0.5) == 0.0


def test_epsilon_cap_reported():
    # Delta far larger than sigma: delta(eps) stays above 1e-300 until eps is astronomically large
    with pytest.raises(CalibrationError):
        calibrate.epsilon_for_delta(OsgtParams(0.0, 1e-8), 1e3, 1e-300)


@pytest.mark.parametrize("bad", [0.0, 1.0, -1e-3, 2.0])
def test_target_must_be_open_unit_interval(bad):
    with pytest.raises(DomainError):
        calibrate.epsilon_for_delta(OsgtParams(1, 1), 1.0, bad)
    with pytest.raises(DomainError):
        CalibrationTarget(bad, Sensitivity(1.0, 1.0))


def test_compare_exact_row():
    rows = calibrate.compare_mechanisms(OsgtParams(3.0, 40.0), Sensitivity.identical(1.0), [0.5, 1.0])
    r = rows[1]
    assert r.method == "exact"
    assert r.delta_osgt == pytest.approx(7.847361e-12, rel=1e-6)
    assert r.delta_gaussian == pytest.approx(3.92851e-9, rel=1e-5)
    assert all(row.ratio > 1 for row in rows)


def test_compare_conversion_row():
    rows = calibrate.compare_mechanisms(OsgtParams(15.0, 630.0), Sensitivity.identical(1.0, 8), [0.5, 0.9])
    assert all(r.method == "renyi_conversion" for r in rows)
    assert rows[1].ratio > 1e3
    assert dist.variance(OsgtParams(15.0, 630.0)) == pytest.approx(398.2175, abs=1e-4)
