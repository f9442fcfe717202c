"""Gaussian tail functions evaluated without underflow or cancellation.

Every function accepts scalars or numpy arrays. Scalars come back as
``float``; arrays come back as ``np.ndarray``.

``Q(x)`` is the standard normal upper tail. The evaluation is delegated to
``scipy.special.ndtr`` / ``log_ndtr``, which switch from an erfc-based
rational approximation to an asymptotic series in the far tail, so
``log_q_function(40)`` is finite (about -804.6) rather than ``-inf``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

from .errors import DomainError

LOG_HALF = math.log(0.5)


def _out(x):
    if np.ndim(x) == 0:
        return float(x)
    return x


def q_function(x):
    """Standard normal upper tail ``Q(x) = P[N(0,1) > x]``."""
    return _out(_sp.ndtr(np.negative(x)))


def log_q_function(x):
    """``ln Q(x)``, accurate for large positive ``x`` where ``Q`` underflows."""
    return _out(_sp.log_ndtr(np.negative(x)))


def log_phi_cdf(x):
    """``ln Phi(x) = ln Q(-x)``."""
    return _out(_sp.log_ndtr(x))


def inverse_q(p):
    """Return ``x`` with ``Q(x) = p`` for ``p`` in (0, 1)."""
    arr = np.asarray(p, dtype=float)
    if np.any(~((arr > 0.0) & (arr < 1.0))):
        raise DomainError(f"inverse_q requires p in (0, 1), got {p!r}")
    return _out(-_sp.ndtri(arr))


def log1mexp(d):
    """``ln(1 - exp(d))`` for ``d <= 0``; switches between log1p and expm1 at -ln 2."""
    d = np.asarray(d, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(
            d > -math.log(2.0),
            np.log(-np.expm1(d)),
            np.log1p(-np.exp(d)),
        )
    return _out(out)


def log_q_difference(lo, hi):
    """``ln(Q(lo) - Q(hi))`` for ``lo < hi``.

    The difference is never formed directly. When both arguments sit on
    the same side of zero the smaller tail is factored out:

    * ``hi > 0``: ``ln Q(lo) + ln(1 - Q(hi)/Q(lo))``
    * ``hi <= 0``: reflect, ``Q(lo) - Q(hi) = Q(-hi) - Q(-lo)``

    ``lo`` may be ``-inf``.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if np.any(~(lo < hi)):
        raise DomainError("log_q_difference requires lo < hi")
    right = hi > 0.0
    a = np.where(right, lo, -hi)
    b = np.where(right, hi, -lo)
    la = _sp.log_ndtr(-a)
    lb = _sp.log_ndtr(-b)
    return _out(la + log1mexp(lb - la))
