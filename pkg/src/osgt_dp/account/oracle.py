"""Quadrature oracles that check the closed forms independently.

Nothing here calls the closed-form delta or Renyi formulas. The worst-case
set boundary is found by root-finding on the privacy loss rather than taken
from its formula. Integrals are split at every kink of the OSGT density
(its location, the neighbour's location, the set boundary) because the
density is not smooth there.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate, optimize

from ..dist import OsgtParams, log_pdf
from ..errors import DomainError, QuadratureError
from ..mech import privacy_loss

DELTA_FLOOR = 1e-13
QUAD_RTOL = 1e-12
QUAD_LIMIT = 500


class PrecisionFloorWarning(UserWarning):
    """delta is below what the oracle resolves to its stated tolerance."""


def _segments(f, points):
    """Integrate ``f`` piecewise over sorted, de-duplicated ``points``."""
    pts = sorted(set(float(x) for x in points if math.isfinite(x)))
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for a, b in zip(pts[:-1], pts[1:]):
            if b - a <= 0:
                continue
            try:
                val, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=QUAD_RTOL, limit=QUAD_LIMIT)
            except integrate.IntegrationWarning as exc:
                raise QuadratureError(f"quadrature on [{a:.6g}, {b:.6g}] did not converge: {exc}") from exc
            total += val
    return total


def loss_crossing(p: OsgtParams, q: float, q_prime: float, eps: float) -> float:
    """Point ``y*`` where the privacy loss falls through ``eps`` (``q < q_prime``)."""
    if not q < q_prime:
        raise DomainError("loss_crossing needs q < q_prime")

    def g(y):
        return privacy_loss(p, q, q_prime, y) - eps

    hi = 0.5 * (q + q_prime) + p.sigma
    while g(hi) > 0:
        hi += 2.0 * (hi - q + p.sigma)
    lo = q - p.sigma
    while g(lo) < 0:
        lo -= 2.0 * (q_prime - lo + p.sigma)
    return optimize.brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def delta_quadrature(p: OsgtParams, delta_q: float, eps: float) -> float:
    """``delta = integral of max(0, f_q - e^eps f_q')`` with ``q' - q = delta_q``."""
    if not delta_q >= 0 or not eps >= 0:
        raise DomainError("delta_q and eps must be >= 0")
    if delta_q == 0:
        return 0.0
    q, qp = 0.0, float(delta_q)
    y_star = loss_crossing(p, q, qp, eps)
    top = min(y_star, q)
    c = float(log_pdf(p, top, q))

    def h(y):
        loss = privacy_loss(p, q, qp, y)
        return math.exp(float(log_pdf(p, y, q)) - c) * -math.expm1(eps - loss)

    # far out in the tail the density decays over sigma2 / |y| rather than sigma
    scale = min(p.sigma, p.sigma2 / (abs(top) + p.m))
    lower = top - 40.0 * scale
    points = [lower, y_star] + [x for x in (q, qp) if lower < x < y_star]
    points += [y_star - scale * f for f in (0.1, 1.0, 5.0)]
    total = _segments(h, [x for x in points if x >= lower])
    delta = total * math.exp(c) if total > 0 else 0.0
    if delta < DELTA_FLOOR:
        warnings.warn(
            f"oracle delta {delta:.3e} is below the {DELTA_FLOOR:g} precision floor",
            PrecisionFloorWarning,
            stacklevel=2,
        )
    return delta


def renyi_quadrature(p: OsgtParams, delta_q: float, alpha: float) -> float:
    """``ln(integral f_q^alpha f_q'^(1-alpha)) / (alpha - 1)`` by direct quadrature."""
    if not alpha > 1:
        raise DomainError(f"alpha must be > 1, got {alpha}")
    if not delta_q >= 0:
        raise DomainError("delta_q must be >= 0")
    if delta_q == 0:
        return 0.0
    q, qp = 0.0, float(delta_q)
    centre = alpha * q + (1.0 - alpha) * qp
    lo = min(q, centre) - 50.0 * p.sigma
    hi = max(qp, centre) + 50.0 * p.sigma

    def logg(y):
        return alpha * log_pdf(p, y, q) + (1.0 - alpha) * log_pdf(p, y, qp)

    probe = np.concatenate([np.linspace(lo, hi, 4001), [q, qp, centre]])
    c = float(np.max(logg(probe)))

    def g(y):
        return math.exp(float(logg(y)) - c)

    spread = [centre + k * p.sigma for k in (-5.0, -1.0, 1.0, 5.0)]
    points = [lo, hi, q, qp, centre] + [x for x in spread if lo < x < hi]
    total = _segments(g, points)
    return (math.log(total) + c) / (alpha - 1.0)


def pdf_moment(p: OsgtParams, power: int, lo: float | None = None, hi: float | None = None) -> float:
    """``integral y^power f(y) dy`` over ``[lo, hi]`` (default ``+-(50 sigma + m)``)."""
    span = 50.0 * p.sigma + p.m
    lo = -span if lo is None else lo
    hi = span if hi is None else hi
    points = [lo, hi] + [x for x in (0.0, -p.sigma, p.sigma) if lo < x < hi]
    return _segments(lambda y: y**power * math.exp(float(log_pdf(p, y))), points)
