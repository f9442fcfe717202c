"""The offset-symmetric Gaussian tails (OSGT) distribution.

The density glues the outer tails of N(-m, s2) (for y > 0) and N(m, s2)
(for y <= 0) and renormalises:

    f(y) = exp(-y**2 / (2 s2) - m |y| / s2) / S'

with ``S = 2 sqrt(2 pi s2) Q(m / sigma)`` and ``S' = exp(m**2 / (2 s2)) S``.
``m`` and ``s2`` are shape inputs, not moments: the mean is 0 and the
variance ``V(m, s2)`` is strictly below ``s2`` whenever ``m > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from . import special
from .errors import DomainError, SamplerError

MAX_TRIALS = 10**9

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class OsgtParams:
    """Input pair ``(m, sigma2)`` with cached normalisers.

    ``m = 0`` is allowed and gives N(0, sigma2) exactly.
    """

    m: float
    sigma2: float
    sigma: float = field(init=False, repr=False)
    log_q0: float = field(init=False, repr=False)
    log_s: float = field(init=False, repr=False)
    log_s_prime: float = field(init=False, repr=False)

    def __post_init__(self):
        m, s2 = float(self.m), float(self.sigma2)
        if not (math.isfinite(m) and math.isfinite(s2)):
            raise DomainError("m and sigma2 must be finite")
        if s2 <= 0.0:
            raise DomainError(f"sigma2 must be > 0, got {s2}")
        if m < 0.0:
            raise DomainError(f"m must be >= 0, got {m}")
        sigma = math.sqrt(s2)
        log_q0 = special.log_q_function(m / sigma)
        log_s = math.log(2.0) + LOG_SQRT_2PI + 0.5 * math.log(s2) + log_q0
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "sigma2", s2)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "log_q0", log_q0)
        object.__setattr__(self, "log_s", log_s)
        object.__setattr__(self, "log_s_prime", log_s + m * m / (2.0 * s2))

    @property
    def ratio(self) -> float:
        """``m / sigma``, the shape ratio that governs everything."""
        return self.m / self.sigma

    @property
    def q0(self) -> float:
        """``Q(m / sigma)``."""
        return math.exp(self.log_q0)

    @property
    def log_two_q0(self) -> float:
        return math.log(2.0) + self.log_q0

    @property
    def s(self) -> float:
        return math.exp(self.log_s)

    @property
    def s_prime(self) -> float:
        return math.exp(self.log_s_prime)


@dataclass(frozen=True)
class MatchedReferences:
    """Gaussian variance and Laplace scale with the same actual variance."""

    sigma_g2: float
    lam: float


@dataclass
class TailVerdict:
    """Survival ratios on a grid and the point past which they keep rising.

    ``y0`` is ``None`` when the ratio never becomes strictly increasing
    through the end of the grid (for example a distribution against itself).
    """

    y0: float | None
    ratio_samples: list[tuple[float, float]]
    log_ratios: list[float]


def _out(x):
    if np.ndim(x) == 0:
        return float(x)
    return x


def log_pdf(p: OsgtParams, y, loc=0.0):
    """Log density at ``y`` of the OSGT law centred at ``loc``."""
    u = np.asarray(y, dtype=float) - loc
    return _out(-u * u / (2.0 * p.sigma2) - p.m * np.abs(u) / p.sigma2 - p.log_s_prime)


def pdf(p: OsgtParams, y, loc=0.0):
    return _out(np.exp(log_pdf(p, y, loc)))


def sf(p: OsgtParams, y):
    """Survival function ``P[Y > y]``; exact in the far right tail."""
    y = np.asarray(y, dtype=float)
    pos = np.maximum(y, 0.0)
    neg = np.minimum(y, 0.0)
    right = np.exp(special.log_q_function((p.m + pos) / p.sigma) - p.log_two_q0)
    left = -np.expm1(special.log_q_function((p.m - neg) / p.sigma) - p.log_two_q0)
    return _out(np.where(y > 0.0, right, left))


def log_sf(p: OsgtParams, y):
    y = np.asarray(y, dtype=float)
    pos = np.maximum(y, 0.0)
    neg = np.minimum(y, 0.0)
    right = special.log_q_function((p.m + pos) / p.sigma) - p.log_two_q0
    left = special.log1mexp(special.log_q_function((p.m - neg) / p.sigma) - p.log_two_q0)
    return _out(np.where(y > 0.0, right, left))


def cdf(p: OsgtParams, y):
    """``P[Y <= y]``, piecewise in the sign of ``y``, continuous at 0."""
    y = np.asarray(y, dtype=float)
    pos = np.maximum(y, 0.0)
    neg = np.minimum(y, 0.0)
    left = np.exp(special.log_q_function((p.m - neg) / p.sigma) - p.log_two_q0)
    right = -np.expm1(special.log_q_function((p.m + pos) / p.sigma) - p.log_two_q0)
    return _out(np.where(y <= 0.0, left, right))


def quantile(p: OsgtParams, u):
    """Inverse cdf. Only used for tests; :func:`sample` is the sampler."""
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0.0) | (u >= 1.0)):
        raise DomainError("quantile requires u in (0, 1)")
    two_q0 = 2.0 * p.q0
    lower = np.minimum(u, 0.5)
    upper = np.minimum(1.0 - u, 0.5)
    y_lo = p.m - p.sigma * special.inverse_q(two_q0 * lower)
    y_hi = p.sigma * special.inverse_q(two_q0 * upper) - p.m
    return _out(np.where(u <= 0.5, y_lo, y_hi))


def variance(p: OsgtParams) -> float:
    """Closed-form variance ``V(m, s2)``.

    ``V = s2 + m**2 - m sigma exp(-m**2/(2 s2)) / (sqrt(2 pi) Q(m/sigma))``
    """
    if p.m == 0.0:
        return p.sigma2
    m, sigma = p.m, p.sigma
    corr = math.exp(math.log(m * sigma) - m * m / (2.0 * p.sigma2) - LOG_SQRT_2PI - p.log_q0)
    return p.sigma2 + m * m - corr


def is_sub_gaussian(p: OsgtParams) -> bool:
    """Sufficient condition ``m / sigma <= Q^{-1}(1/4)`` for s2-sub-Gaussian tails."""
    return p.ratio <= special.inverse_q(0.25)


def matched_references(p: OsgtParams) -> MatchedReferences:
    v = variance(p)
    return MatchedReferences(sigma_g2=v, lam=math.sqrt(v / 2.0))


def sample(p: OsgtParams, rng: np.random.Generator) -> float:
    """Draw one variate: reject ``|G| < m`` for ``G ~ N(0, s2)``, then shift toward 0."""
    for _ in range(MAX_TRIALS):
        g = rng.normal(0.0, p.sigma)
        if abs(g) >= p.m:
            return math.copysign(abs(g) - p.m, g)
    raise SamplerError(f"no acceptance in {MAX_TRIALS} trials; RNG is broken")


def sample_n(p: OsgtParams, n: int, rng: np.random.Generator) -> tuple[np.ndarray, int]:
    """Draw ``n`` variates with the same rejection rule, batched.

    Returns ``(values, trials)`` where ``trials`` counts the Gaussian draws
    consumed up to and including the last accepted one.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    out = np.empty(n)
    filled = 0
    trials = 0
    accept = max(2.0 * p.q0, 1e-6)
    while filled < n:
        need = n - filled
        batch = int(min(need / accept * 1.05 + 64, 2**24))
        g = rng.normal(0.0, p.sigma, size=batch)
        ok = np.abs(g) >= p.m
        idx = np.flatnonzero(ok)
        if idx.size >= need:
            take = idx[:need]
            trials += int(take[-1]) + 1
        else:
            take = idx
            trials += batch
        got = g[take]
        out[filled:filled + take.size] = np.sign(got) * (np.abs(got) - p.m)
        filled += take.size
        if trials > MAX_TRIALS:
            raise SamplerError(f"exceeded {MAX_TRIALS} trials; RNG is broken")
    return out, trials


def gaussian_log_sf(sigma_g2: float, y):
    return special.log_q_function(np.asarray(y, dtype=float) / math.sqrt(sigma_g2))


def laplace_log_sf(lam: float, y):
    """Log survival of Laplace(0, lam) for ``y >= 0``."""
    return _out(math.log(0.5) - np.asarray(y, dtype=float) / lam)


def gaussian_pdf(sigma_g2: float, y):
    y = np.asarray(y, dtype=float)
    return _out(np.exp(-y * y / (2.0 * sigma_g2) - 0.5 * math.log(2.0 * math.pi * sigma_g2)))


def laplace_pdf(lam: float, y):
    return _out(np.exp(-np.abs(np.asarray(y, dtype=float)) / lam) / (2.0 * lam))


def survival_ratio_scan(
    p: OsgtParams,
    other: Literal["gaussian", "laplace", "osgt"],
    grid: Sequence[float],
) -> TailVerdict:
    """Compare survival functions at matched variance on a positive grid.

    ``gaussian`` reports OSGT/Gaussian, ``laplace`` reports Laplace/OSGT
    (heavier over lighter in both cases), ``osgt`` compares with itself.
    """
    y = np.asarray(grid, dtype=float)
    if y.ndim != 1 or y.size < 2 or np.any(y <= 0) or np.any(np.diff(y) <= 0):
        raise DomainError("grid must be strictly increasing and positive")
    ref = matched_references(p)
    own = np.asarray(log_sf(p, y))
    if other == "gaussian":
        log_ratio = own - np.asarray(gaussian_log_sf(ref.sigma_g2, y))
    elif other == "laplace":
        log_ratio = np.asarray(laplace_log_sf(ref.lam, y)) - own
    elif other == "osgt":
        log_ratio = own - own
    else:
        raise DomainError(f"unknown comparison {other!r}")

    rising = np.diff(log_ratio) > 0
    y0 = None
    # y0 = start of the longest strictly rising suffix
    if rising.size and rising[-1]:
        start = rising.size
        while start > 0 and rising[start - 1]:
            start -= 1
        y0 = float(y[start])
    return TailVerdict(
        y0=y0,
        ratio_samples=[(float(a), float(b)) for a, b in zip(y, np.exp(log_ratio))],
        log_ratios=[float(v) for v in log_ratio],
    )
