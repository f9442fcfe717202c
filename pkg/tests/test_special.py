import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from osgt_dp import special
from osgt_dp.errors import DomainError


def test_q_fixtures(reference):
    assert special.q_function(1.0) == pytest.approx(reference["q_1"], rel=1e-15)
    assert special.log_q_function(10.0) == pytest.approx(reference["log_q_10"], rel=1e-14)
    assert special.log_q_function(40.0) == pytest.approx(reference["log_q_40"], rel=1e-14)


def test_log_q_difference_fixture(reference):
    got = special.log_q_difference(10.0, 11.0)
    assert got == pytest.approx(reference["log_q_10_minus_q_11"], rel=1e-14)


def test_log_q_difference_reflects_for_negative_arguments():
    # Q(-11) - Q(-10) = Q(10) - Q(11)
    a = special.log_q_difference(-11.0, -10.0)
    b = special.log_q_difference(10.0, 11.0)
    assert a == pytest.approx(b, rel=1e-14)


def test_log_q_difference_open_lower_end():
    assert special.log_q_difference(-np.inf, 0.0) == pytest.approx(math.log(0.5), abs=1e-15)


def test_log_q_difference_rejects_unordered():
    with pytest.raises(DomainError):
        special.log_q_difference(1.0, 1.0)


def test_vectorised_and_scalar_types():
    assert isinstance(special.q_function(0.3), float)
    out = special.q_function(np.array([0.0, 1.0]))
    assert out.shape == (2,)
    assert out[0] == 0.5


def test_inverse_q_rejects_boundary():
    for p in (0.0, 1.0, -0.1, 2.0):
        with pytest.raises(DomainError):
            special.inverse_q(p)


def test_inverse_q_quartile():
    assert special.inverse_q(0.25) == pytest.approx(0.6744897501960817, rel=1e-14)


@given(st.floats(-37.0, 37.0))
def test_symmetry(x):
    assert special.q_function(x) + special.q_function(-x) == pytest.approx(1.0, abs=2e-16)


@given(st.floats(1e-300, 1.0 - 1e-16, exclude_max=True))
def test_inverse_round_trip(p):
    x = special.inverse_q(p)
    assert special.q_function(x) == pytest.approx(p, rel=1e-12)


@given(st.floats(-1e3, -1e-300))
def test_log1mexp_matches_definition(d):
    got = special.log1mexp(d)
    ref = float(mpmath.log(-mpmath.expm1(mpmath.mpf(d))))
    assert got == pytest.approx(ref, rel=1e-14)


@given(st.floats(-50.0, 50.0), st.floats(1e-3, 20.0))
def test_log_q_difference_matches_linear_when_representable(lo, width):
    hi = lo + width
    lin = special.q_function(lo) - special.q_function(hi)
    if lin > 1e-250 and lin > 1e-10 * special.q_function(lo):
        assert special.log_q_difference(lo, hi) == pytest.approx(math.log(lin), rel=1e-8)


def test_log_q_monotone_far_tail():
    x = np.linspace(0.0, 1e4, 2001)
    lq = special.log_q_function(x)
    assert np.all(np.isfinite(lq))
    assert np.all(np.diff(lq) < 0)
