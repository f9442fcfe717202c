"""Offset-symmetric Gaussian tails (OSGT) noise for differential privacy."""

from .dist import OsgtParams, matched_references, variance
from .errors import (
    CalibrationError,
    ConsistencyError,
    DomainError,
    NonMonotoneError,
    OsgtError,
    QuadratureError,
    SamplerError,
)
from .mech import Sensitivity

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "ConsistencyError",
    "DomainError",
    "NonMonotoneError",
    "OsgtError",
    "OsgtParams",
    "QuadratureError",
    "SamplerError",
    "Sensitivity",
    "matched_references",
    "variance",
]
