"""Inverse problems: epsilon for a delta target, sigma2 for an (eps, delta) target.

All solvers bisect on a monotone predicate. delta is proven monotone in
eps; monotonicity in sigma2 is not, so :func:`sigma2_for_target` checks it
on every bracket before trusting the bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np

from .account import gaussian_delta, gaussian_delta_via_renyi, osgt_delta, osgt_delta_via_renyi
from .dist import OsgtParams, variance
from .errors import CalibrationError, DomainError, NonMonotoneError
from .mech import Sensitivity

EPS_CAP = 1e6
EPS_RTOL = 1e-9
SIGMA2_RTOL = 1e-10
MAX_EXPANSIONS = 200
MONOTONE_PROBES = 17
MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class CalibrationTarget:
    target_delta: float
    sensitivity: Sensitivity
    mechanism: Literal["osgt", "gaussian"] = "osgt"
    target_eps: float | None = None

    def __post_init__(self):
        _check_target(self.target_delta)


@dataclass(frozen=True)
class ComparisonRow:
    eps: float
    delta_osgt: float
    delta_gaussian: float
    ratio: float
    method: Literal["exact", "renyi_conversion"]


def _check_target(target_delta: float):
    if not 0.0 < target_delta < 1.0:
        raise DomainError(f"target delta must be in (0, 1), got {target_delta}")


def _bisect(ok: Callable[[float], bool], lo: float, hi: float, rtol: float) -> float:
    """Boundary between ``ok(lo) is False`` and ``ok(hi) is True``."""
    for _ in range(400):
        if hi - lo <= rtol * abs(hi):
            break
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _epsilon_for(delta_at: Callable[[float], float], target_delta: float) -> float:
    _check_target(target_delta)
    if delta_at(0.0) <= target_delta:
        return 0.0
    hi = 1.0
    while delta_at(hi) > target_delta:
        hi *= 2.0
        if hi > EPS_CAP:
            raise CalibrationError(f"no eps <= {EPS_CAP:g} reaches delta = {target_delta:g}")
    return _bisect(lambda e: delta_at(e) <= target_delta, 0.0, hi, EPS_RTOL)


def epsilon_for_delta(p: OsgtParams, delta_q: float, target_delta: float) -> float:
    """Smallest eps with exact OSGT delta(eps) <= ``target_delta``."""
    return _epsilon_for(lambda e: osgt_delta(p, delta_q, e).delta, target_delta)


def gaussian_epsilon_for_delta(sigma_g2: float, delta2: float, target_delta: float) -> float:
    return _epsilon_for(lambda e: gaussian_delta(sigma_g2, delta2, e).delta, target_delta)


def _sigma2_for(delta_at: Callable[[float], float], target_delta: float, start: float) -> float:
    _check_target(target_delta)
    lo = hi = start
    for _ in range(MAX_EXPANSIONS):
        if delta_at(lo) > target_delta:
            break
        lo /= 2.0
    else:
        raise CalibrationError("could not find a sigma2 small enough to exceed the delta target")
    for _ in range(MAX_EXPANSIONS):
        if delta_at(hi) <= target_delta:
            break
        hi *= 2.0
    else:
        raise CalibrationError("could not find a sigma2 large enough to meet the delta target")

    probes = np.geomspace(lo, hi, MONOTONE_PROBES)
    ds = np.array([delta_at(float(s)) for s in probes])
    rises = ds[1:] - ds[:-1]
    if np.any(rises > MONOTONE_SLACK * np.maximum(ds[:-1], 1e-300)):
        i = int(np.argmax(rises))
        raise NonMonotoneError(
            f"delta rises from {ds[i]:.3e} to {ds[i + 1]:.3e} between sigma2 = "
            f"{probes[i]:.6g} and {probes[i + 1]:.6g}"
        )
    # bisect in log sigma2
    t = _bisect(
        lambda x: delta_at(math.exp(x)) <= target_delta,
        math.log(lo), math.log(hi), SIGMA2_RTOL,
    )
    return math.exp(t)


def sigma2_for_target(m: float, delta_q: float, eps: float, target_delta: float) -> float:
    """sigma2 (with ``m`` held fixed) at which exact OSGT delta(eps) equals the target."""
    if not (m >= 0 and delta_q > 0 and eps >= 0):
        raise DomainError("need m >= 0, delta_q > 0, eps >= 0")
    start = max(delta_q * delta_q, m * m, 1.0)
    return _sigma2_for(lambda s2: osgt_delta(OsgtParams(m, s2), delta_q, eps).delta, target_delta, start)


def gaussian_sigma2_for_target(delta2: float, eps: float, target_delta: float) -> float:
    if not (delta2 > 0 and eps >= 0):
        raise DomainError("need delta2 > 0, eps >= 0")
    return _sigma2_for(lambda s2: gaussian_delta(s2, delta2, eps).delta, target_delta, max(delta2 * delta2, 1.0))


def compare_mechanisms(p: OsgtParams, s: Sensitivity, eps_grid: Sequence[float]) -> list[ComparisonRow]:
    """OSGT vs variance-matched Gaussian delta over an eps grid.

    Uses the exact curves when ``k = 1`` and the Renyi conversion bound
    otherwise. ``ratio`` is Gaussian delta over OSGT delta, so values above
    1 favour OSGT.
    """
    sigma_g2 = variance(p)
    rows = []
    for eps in eps_grid:
        eps = float(eps)
        if s.k == 1:
            d = s.per_coord if s.per_coord is not None else s.delta2
            d_t = osgt_delta(p, d, eps).delta
            d_g = gaussian_delta(sigma_g2, s.delta2, eps).delta
            method = "exact"
        else:
            d_t = osgt_delta_via_renyi(p, s, eps).delta
            d_g = gaussian_delta_via_renyi(sigma_g2, s.delta2, eps).delta
            method = "renyi_conversion"
        if d_t > 0:
            ratio = d_g / d_t
        else:
            ratio = math.inf if d_g > 0 else math.nan
        rows.append(ComparisonRow(eps, d_t, d_g, ratio, method))
    return rows
