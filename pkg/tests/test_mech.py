import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from osgt_dp import dist, mech
from osgt_dp.dist import OsgtParams
from osgt_dp.errors import DomainError
from osgt_dp.mech import Sensitivity


def test_sensitivity_identical():
    s = Sensitivity.identical(1.0, 8)
    assert s.delta1 == 8 and s.delta2 == pytest.approx(math.sqrt(8)) and s.k == 8


@pytest.mark.parametrize("kwargs", [
    dict(delta1=1, delta2=1, k=0),
    dict(delta1=0, delta2=1),
    dict(delta1=1, delta2=2, k=2, per_coord=1),
    dict(delta1=3, delta2=1, k=2, per_coord=1),
])
def test_sensitivity_invariants(kwargs):
    with pytest.raises(DomainError):
        Sensitivity(**kwargs)


def test_mechanisms_are_unbiased_with_matched_variance(rng):
    p = OsgtParams(3.0, 40.0)
    ref = dist.matched_references(p)
    q = np.full(100_000, 5.0)
    for out in (mech.apply_osgt(q, p, rng), mech.apply_gaussian(q, ref.sigma_g2, rng),
                mech.apply_laplace(q, ref.lam, rng)):
        noise = out.values - q
        assert abs(noise.mean()) < 5 * math.sqrt(ref.sigma_g2 / q.size)
        assert noise.var() == pytest.approx(ref.sigma_g2, rel=0.03), out.mechanism


def test_apply_osgt_scalar_query(rng):
    out = mech.apply_osgt(2.0, OsgtParams(1.0, 1.0), rng)
    assert out.values.shape == (1,)
    assert out.mechanism == "osgt"


def test_laplace_scale_round_trip():
    assert mech.laplace_epsilon(2.0, mech.laplace_scale(2.0, 0.7)) == pytest.approx(0.7)


@given(st.floats(0.0, 3.0), st.floats(0.1, 100.0), st.floats(0.01, 5.0), st.floats(-100, 100))
def test_privacy_loss_antisymmetric(r, s2, d, y):
    p = OsgtParams(r * math.sqrt(s2), s2)
    assert mech.privacy_loss(p, 0.0, d, y) == -mech.privacy_loss(p, d, 0.0, y)


@given(st.floats(0.0, 3.0), st.floats(0.1, 100.0), st.floats(0.01, 5.0), st.floats(-100, 100))
def test_privacy_loss_matches_log_density_ratio(r, s2, d, y):
    p = OsgtParams(r * math.sqrt(s2), s2)
    direct = dist.log_pdf(p, y, 0.0) - dist.log_pdf(p, y, d)
    assert mech.privacy_loss(p, 0.0, d, y) == pytest.approx(direct, rel=1e-9, abs=1e-9)


def test_privacy_loss_nonincreasing_in_y():
    p = OsgtParams(3.0, 40.0)
    y = np.linspace(-50, 50, 2001)
    assert np.all(np.diff(mech.privacy_loss(p, 0.0, 1.0, y)) < 0)
