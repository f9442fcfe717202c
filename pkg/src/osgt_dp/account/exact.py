"""Exact (epsilon, delta) curves for the 1-D OSGT and Gaussian mechanisms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .. import special
from ..dist import OsgtParams
from ..errors import ConsistencyError, DomainError

Source = Literal["exact_osgt", "gaussian_analytic", "renyi_conversion", "quadrature_oracle"]

CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class PrivacyPoint:
    eps: float
    delta: float
    source: Source
    alpha: float | None = None  # optimising Renyi order, conversions only

    def __post_init__(self):
        if not (self.eps >= 0 and 0.0 <= self.delta <= 1.0):
            raise ConsistencyError(f"invalid privacy point eps={self.eps} delta={self.delta}")


@dataclass(frozen=True)
class CaseBoundary:
    """Epsilon at which the OSGT delta switches formula."""

    eps_star: float

    @classmethod
    def of(cls, p: OsgtParams, delta_q: float) -> "CaseBoundary":
        return cls((delta_q * delta_q + 2.0 * p.m * delta_q) / (2.0 * p.sigma2))


def _clamp(delta: float) -> float:
    if math.isnan(delta):
        raise ConsistencyError("delta evaluated to NaN")
    if delta < 0.0:
        if delta < -CLAMP_TOL:
            raise ConsistencyError(f"delta = {delta:.3e} is negative beyond rounding")
        return 0.0
    if delta > 1.0:
        if delta > 1.0 + CLAMP_TOL:
            raise ConsistencyError(f"delta = {delta:.3e} exceeds 1 beyond rounding")
        return 1.0
    return delta


def _tail_difference(log_lead: float, log_sub: float) -> float:
    """``exp(log_lead) - exp(log_sub)`` for nearly-cancelling terms."""
    d = log_sub - log_lead
    if d <= 0.0:
        return math.exp(log_lead + special.log1mexp(d))
    return -math.exp(log_lead) * math.expm1(d)


def _check(p: OsgtParams, delta_q: float, eps: float):
    if not delta_q > 0:
        raise DomainError(f"sensitivity must be > 0, got {delta_q}")
    if not eps >= 0:
        raise DomainError(f"eps must be >= 0, got {eps}")


def osgt_delta_small_eps(p: OsgtParams, delta_q: float, eps: float) -> float:
    """Formula valid for ``sigma2 eps / delta_q <= delta_q / 2 + m``.

    ``1 - [Q(1/(2b) - b eps) + e^eps Q(1/(2b) + b eps)] / (2 Q(m/sigma))``
    with ``b = sigma / (2m + delta_q)``. Unclamped.
    """
    b = p.sigma / (2.0 * p.m + delta_q)
    lq1 = special.log_q_function(1.0 / (2.0 * b) - b * eps)
    lq2 = special.log_q_function(1.0 / (2.0 * b) + b * eps)
    total = float(np.logaddexp(lq1, eps + lq2)) - p.log_two_q0
    return -math.expm1(total)


def osgt_delta_large_eps(p: OsgtParams, delta_q: float, eps: float) -> float:
    """Formula valid for ``sigma2 eps / delta_q > delta_q / 2 + m``.

    ``[Q(a eps - 1/(2a)) - e^eps Q(a eps + 1/(2a))] / (2 Q(m/sigma))``
    with ``a = sigma / delta_q``. Unclamped.
    """
    a = p.sigma / delta_q
    lq1 = special.log_q_function(a * eps - 1.0 / (2.0 * a))
    lq2 = special.log_q_function(a * eps + 1.0 / (2.0 * a))
    return _tail_difference(lq1 - p.log_two_q0, eps + lq2 - p.log_two_q0)


def osgt_delta(p: OsgtParams, delta_q: float, eps: float) -> PrivacyPoint:
    """Exact delta(eps) of the 1-D OSGT mechanism with sensitivity ``delta_q``."""
    _check(p, delta_q, eps)
    if p.sigma2 * eps / delta_q <= delta_q / 2.0 + p.m:
        d = osgt_delta_small_eps(p, delta_q, eps)
    else:
        d = osgt_delta_large_eps(p, delta_q, eps)
    return PrivacyPoint(eps, _clamp(d), "exact_osgt")


def gaussian_delta(sigma_g2: float, delta2: float, eps: float) -> PrivacyPoint:
    """Exact delta(eps) of the Gaussian mechanism.

    ``Q(sg eps / D - D / (2 sg)) - e^eps Q(sg eps / D + D / (2 sg))``; the
    single expression covers both eps regimes because ``Q(-x) = 1 - Q(x)``.
    """
    if not sigma_g2 > 0:
        raise DomainError(f"sigma_g2 must be > 0, got {sigma_g2}")
    if not delta2 > 0:
        raise DomainError(f"delta2 must be > 0, got {delta2}")
    if not eps >= 0:
        raise DomainError(f"eps must be >= 0, got {eps}")
    sg = math.sqrt(sigma_g2)
    lq1 = special.log_q_function(sg * eps / delta2 - delta2 / (2.0 * sg))
    lq2 = special.log_q_function(sg * eps / delta2 + delta2 / (2.0 * sg))
    return PrivacyPoint(eps, _clamp(_tail_difference(lq1, eps + lq2)), "gaussian_analytic")


def boundary_delta(p: OsgtParams, delta_q: float) -> float:
    """Common value of both formulas at the case boundary, in linear space.

    ``1/2 - e^eps* Q((m + delta_q)/sigma) / (2 Q(m/sigma))``
    """
    eps_star = CaseBoundary.of(p, delta_q).eps_star
    q0 = special.q_function(p.m / p.sigma)
    q1 = special.q_function((p.m + delta_q) / p.sigma)
    return 0.5 - math.exp(eps_star) * q1 / (2.0 * q0)
