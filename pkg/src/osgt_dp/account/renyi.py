"""Renyi-divergence accounting for the OSGT mechanism.

For two OSGT outputs located ``d`` apart the order-alpha divergence has
the closed form

    tau = alpha d^2 / (2 s2) + ln(B / (2 Q(m/sigma))) / (alpha - 1)
    B   = Phi(b1/sigma) + Phi(b2/sigma) + A (Phi(b3/sigma) - Phi(b4/sigma))

with ``b1 = (alpha-1) d - m``, ``b2 = -m - alpha d``,
``b3 = alpha d + m (2 alpha - 1)``, ``b4 = b3 - d`` and
``A = exp(alpha (alpha-1) (4 m d + 4 m^2) / (2 s2))``. ``A`` overflows for
large alpha while the Phi difference underflows, so ``B`` is assembled
entirely from logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import special
from ..dist import OsgtParams
from ..errors import DomainError
from ..mech import Sensitivity
from .exact import PrivacyPoint

ALPHA_MIN = 1.0 + 1e-6
ALPHA_MAX = 1e4
ALPHA_GRID_N = 200
GOLDEN_RTOL = 1e-10


@dataclass(frozen=True)
class ZcdpBound:
    """``D_alpha <= zeta + alpha rho``; ``zeta`` depends on the tagged alpha."""

    zeta: float
    rho: float
    k: int
    alpha: float

    @property
    def bound(self) -> float:
        return self.zeta + self.alpha * self.rho


@dataclass(frozen=True)
class RenyiEvaluation:
    """Closed-form divergence with its intermediate terms.

    ``log_a`` is ``ln A`` and ``log_b_bar`` is ``ln B``; both stay in log
    form because their linear values over/underflow for large alpha.
    """

    alpha: float
    tau: float
    delta_q: float
    b1: float
    b2: float
    b3: float
    b4: float
    log_a: float
    log_b_bar: float
    k: int = 1


@dataclass(frozen=True)
class RenyiWorstCase:
    evaluation: RenyiEvaluation
    grid: np.ndarray
    taus: np.ndarray
    at_endpoint: bool

    @property
    def argmax(self) -> float:
        return self.evaluation.delta_q


def _check_alpha(alpha):
    if np.any(~(np.asarray(alpha, dtype=float) > 1.0)):
        raise DomainError(f"alpha must be > 1, got {alpha!r}")


def log_b_terms(p: OsgtParams, d: float, alpha):
    """Return ``(b1, b2, b3, b4, ln A, ln B)``; vectorised over ``alpha``."""
    alpha = np.asarray(alpha, dtype=float)
    m, sigma, s2 = p.m, p.sigma, p.sigma2
    b1 = -m + (alpha - 1.0) * d
    b2 = -m - alpha * d
    b3 = alpha * d - m * (1.0 - 2.0 * alpha)
    b4 = b3 - d
    log_a = alpha * (alpha - 1.0) * (4.0 * m * d + 4.0 * m * m) / (2.0 * s2)
    t1 = special.log_phi_cdf(b1 / sigma)
    t2 = special.log_phi_cdf(b2 / sigma)
    if d > 0:
        t3 = log_a + special.log_q_difference(b4 / sigma, b3 / sigma)
    else:
        t3 = np.full_like(alpha, -np.inf)
    log_b = np.logaddexp(np.logaddexp(t1, t2), t3)
    return b1, b2, b3, b4, log_a, log_b


def _scalar(x) -> float:
    return float(np.asarray(x))


def osgt_renyi_closed_form(p: OsgtParams, delta_q: float, alpha: float) -> RenyiEvaluation:
    """Exact order-alpha Renyi divergence between OSGT outputs ``delta_q`` apart."""
    _check_alpha(alpha)
    if not delta_q >= 0:
        raise DomainError(f"delta_q must be >= 0, got {delta_q}")
    b1, b2, b3, b4, log_a, log_b = log_b_terms(p, delta_q, alpha)
    log_b = _scalar(log_b)
    tau = alpha * delta_q**2 / (2.0 * p.sigma2) + (log_b - p.log_two_q0) / (alpha - 1.0)
    return RenyiEvaluation(
        alpha=float(alpha), tau=float(tau), delta_q=float(delta_q),
        b1=_scalar(b1), b2=_scalar(b2), b3=_scalar(b3), b4=_scalar(b4),
        log_a=_scalar(log_a), log_b_bar=log_b,
    )


def osgt_renyi_worst_case(
    p: OsgtParams, delta_max: float, alpha: float, grid_n: int = 101
) -> RenyiWorstCase:
    """Scan ``d`` over a uniform grid on ``[0, delta_max]`` and keep the largest tau."""
    if grid_n < 2:
        raise DomainError("grid_n must be >= 2")
    grid = np.linspace(0.0, delta_max, grid_n)
    evals = [osgt_renyi_closed_form(p, float(d), alpha) for d in grid]
    taus = np.array([e.tau for e in evals])
    i = int(np.argmax(taus))
    return RenyiWorstCase(
        evaluation=evals[i], grid=grid, taus=taus,
        at_endpoint=bool(taus[-1] >= taus[i]),
    )


def osgt_renyi_k_dim(p: OsgtParams, s: Sensitivity, alpha: float) -> RenyiEvaluation:
    """Divergence bound for k i.i.d. coordinates sharing sensitivity ``s.per_coord``."""
    if s.per_coord is None:
        raise DomainError("osgt_renyi_k_dim needs a per-coordinate sensitivity")
    one = osgt_renyi_closed_form(p, s.per_coord, alpha)
    tau = alpha * s.delta2**2 / (2.0 * p.sigma2) + s.k * (one.log_b_bar - p.log_two_q0) / (alpha - 1.0)
    return RenyiEvaluation(
        alpha=one.alpha, tau=float(tau), delta_q=one.delta_q,
        b1=one.b1, b2=one.b2, b3=one.b3, b4=one.b4,
        log_a=one.log_a, log_b_bar=one.log_b_bar, k=s.k,
    )


def osgt_zcdp(p: OsgtParams, delta2: float, k: int, alpha: float) -> ZcdpBound:
    """``rho = delta2^2 / (2 s2)``, ``zeta = k ln((1 - Q)/Q) / (alpha - 1)`` at ``Q = Q(m/sigma)``."""
    _check_alpha(alpha)
    if not delta2 > 0:
        raise DomainError(f"delta2 must be > 0, got {delta2}")
    log_ratio = special.log_q_function(-p.ratio) - p.log_q0
    return ZcdpBound(zeta=k * log_ratio / (alpha - 1.0), rho=delta2**2 / (2.0 * p.sigma2), k=k, alpha=alpha)


def gaussian_rho(sigma_g2: float, delta2: float) -> float:
    return delta2**2 / (2.0 * sigma_g2)


def log_conversion_factor(alpha):
    """``ln[(1 - 1/alpha)^alpha / (alpha - 1)]``."""
    alpha = np.asarray(alpha, dtype=float)
    return alpha * np.log1p(-1.0 / alpha) - np.log(alpha - 1.0)


def renyi_to_delta(tau: float, alpha: float, eps: float) -> float:
    """delta achievable at ``eps`` from ``D_alpha <= tau``, capped at 1."""
    _check_alpha(alpha)
    log_delta = (alpha - 1.0) * (tau - eps) + float(log_conversion_factor(alpha))
    return math.exp(min(log_delta, 0.0))


def minimize_over_alpha(objective, lo: float = ALPHA_MIN, hi: float = ALPHA_MAX):
    """Minimise a vectorised ``objective(alpha)``.

    Coarse pass on a grid log-spaced in ``alpha - 1``, then golden-section
    search in ``ln(alpha - 1)`` between the grid neighbours of the best
    point. Returns ``(alpha, value)``.
    """
    t = np.linspace(math.log(lo - 1.0), math.log(hi - 1.0), ALPHA_GRID_N)
    vals = np.asarray(objective(1.0 + np.exp(t)), dtype=float)
    vals = np.where(np.isnan(vals), np.inf, vals)
    i = int(np.argmin(vals))
    a, b = t[max(i - 1, 0)], t[min(i + 1, t.size - 1)]

    def f(x):
        return float(np.asarray(objective(1.0 + math.exp(x))))

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > GOLDEN_RTOL * max(1.0, abs(a) + abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    best_x, best_v = x, f(x)
    if vals[i] < best_v:
        best_x, best_v = t[i], float(vals[i])
    return 1.0 + math.exp(best_x), best_v


def _check_eps(eps):
    if not eps >= 0:
        raise DomainError(f"eps must be >= 0, got {eps}")


def osgt_log_delta_objective(p: OsgtParams, s: Sensitivity, eps: float):
    """Vectorised ``alpha -> ln delta`` for the converted OSGT bound."""
    if s.per_coord is None:
        raise DomainError("conversion needs a per-coordinate sensitivity")
    d, k, s2, delta2 = s.per_coord, s.k, p.sigma2, s.delta2

    def objective(alpha):
        alpha = np.asarray(alpha, dtype=float)
        log_b = log_b_terms(p, d, alpha)[5]
        return (
            k * (log_b - p.log_two_q0)
            + (alpha - 1.0) * (alpha * delta2**2 / (2.0 * s2) - eps)
            + log_conversion_factor(alpha)
        )

    return objective


def osgt_delta_via_renyi(p: OsgtParams, s: Sensitivity, eps: float) -> PrivacyPoint:
    """Achievable delta(eps) for the k-dim OSGT mechanism, optimised over alpha."""
    _check_eps(eps)
    alpha, log_delta = minimize_over_alpha(osgt_log_delta_objective(p, s, eps))
    return PrivacyPoint(eps, math.exp(min(log_delta, 0.0)), "renyi_conversion", alpha=alpha)


def gaussian_delta_via_renyi(sigma_g2: float, delta2: float, eps: float) -> PrivacyPoint:
    """Achievable delta(eps) for the Gaussian mechanism from ``D_alpha = alpha rho``."""
    _check_eps(eps)
    if not (sigma_g2 > 0 and delta2 > 0):
        raise DomainError("sigma_g2 and delta2 must be > 0")
    rho = gaussian_rho(sigma_g2, delta2)

    def objective(alpha):
        alpha = np.asarray(alpha, dtype=float)
        return (alpha - 1.0) * (alpha * rho - eps) + log_conversion_factor(alpha)

    alpha, log_delta = minimize_over_alpha(objective)
    return PrivacyPoint(eps, math.exp(min(log_delta, 0.0)), "renyi_conversion", alpha=alpha)
