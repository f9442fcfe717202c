"""Output-perturbation mechanisms: OSGT, Gaussian and Laplace noise.

Mechanisms are stateless. Callers own the random generator and declare
sensitivities; no dataset is ever inspected here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Literal, Sequence

import numpy as np

from . import dist
from .dist import OsgtParams
from .errors import DomainError


@dataclass(frozen=True)
class Sensitivity:
    """Global sensitivities of a k-dimensional query.

    ``per_coord`` is the common per-coordinate sensitivity when every
    coordinate has the same one (e.g. k counting queries with per_coord=1,
    delta2=sqrt(k)).
    """

    delta1: float
    delta2: float
    k: int = 1
    per_coord: float | None = None

    def __post_init__(self):
        if self.k < 1 or int(self.k) != self.k:
            raise DomainError("k must be a positive integer")
        if self.delta1 <= 0 or self.delta2 <= 0:
            raise DomainError("sensitivities must be positive")
        if self.per_coord is not None:
            d = self.per_coord
            if d <= 0:
                raise DomainError("per_coord must be positive")
            tol = 1e-12
            if self.delta2**2 > self.k * d * d * (1 + tol):
                raise DomainError("delta2**2 must be <= k * per_coord**2")
            if self.delta1 > self.k * d * (1 + tol):
                raise DomainError("delta1 must be <= k * per_coord")

    @classmethod
    def identical(cls, per_coord: float, k: int = 1) -> "Sensitivity":
        """Worst case where all k coordinates can move by ``per_coord`` at once."""
        return cls(delta1=k * per_coord, delta2=math.sqrt(k) * per_coord, k=k, per_coord=per_coord)


@dataclass(frozen=True)
class MechanismOutput:
    values: np.ndarray
    mechanism: Literal["osgt", "gaussian", "laplace"]
    params: dict[str, Any]


def _query(q: Sequence[float] | float) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(q, dtype=float))
    if arr.ndim != 1:
        raise DomainError("query result must be a vector")
    return arr


def apply_osgt(q, p: OsgtParams, rng: np.random.Generator) -> MechanismOutput:
    values = _query(q)
    noise, _ = dist.sample_n(p, values.size, rng)
    return MechanismOutput(values + noise, "osgt", {"m": p.m, "sigma2": p.sigma2})


def apply_gaussian(q, sigma_g2: float, rng: np.random.Generator) -> MechanismOutput:
    if sigma_g2 <= 0:
        raise DomainError("sigma_g2 must be > 0")
    values = _query(q)
    noise = rng.normal(0.0, math.sqrt(sigma_g2), size=values.size)
    return MechanismOutput(values + noise, "gaussian", {"sigma_g2": sigma_g2})


def apply_laplace(q, lam: float, rng: np.random.Generator) -> MechanismOutput:
    if lam <= 0:
        raise DomainError("lambda must be > 0")
    values = _query(q)
    noise = rng.laplace(0.0, lam, size=values.size)
    return MechanismOutput(values + noise, "laplace", {"lambda": lam})


def laplace_epsilon(delta1: float, lam: float) -> float:
    """Pure-DP epsilon of the Laplace mechanism, ``delta1 / lam``."""
    if delta1 <= 0 or lam <= 0:
        raise DomainError("delta1 and lambda must be > 0")
    return delta1 / lam


def laplace_scale(delta1: float, eps: float) -> float:
    if delta1 <= 0 or eps <= 0:
        raise DomainError("delta1 and eps must be > 0")
    return delta1 / eps


def privacy_loss(p: OsgtParams, q: float, q_prime: float, y):
    """``ln f_q(y) - ln f_q'(y)`` for the 1-D OSGT mechanism.

    The quadratic terms cancel, so this is piecewise linear in ``y`` with
    kinks at ``q`` and ``q_prime``.
    """
    y = np.asarray(y, dtype=float)
    s2 = p.sigma2
    out = (
        (q - q_prime) * (2.0 * y - q - q_prime) / (2.0 * s2)
        + p.m * (np.abs(y - q_prime) - np.abs(y - q)) / s2
    )
    return float(out) if out.ndim == 0 else out
