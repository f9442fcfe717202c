"""Privacy accounting: exact delta(eps), Renyi/zCDP bounds, conversions, oracles."""

from .exact import (
    CaseBoundary,
    PrivacyPoint,
    boundary_delta,
    gaussian_delta,
    osgt_delta,
    osgt_delta_large_eps,
    osgt_delta_small_eps,
)
from .oracle import PrecisionFloorWarning, delta_quadrature, loss_crossing, pdf_moment, renyi_quadrature
from .renyi import (
    RenyiEvaluation,
    RenyiWorstCase,
    ZcdpBound,
    gaussian_delta_via_renyi,
    gaussian_rho,
    osgt_delta_via_renyi,
    osgt_renyi_closed_form,
    osgt_renyi_k_dim,
    osgt_renyi_worst_case,
    osgt_zcdp,
    renyi_to_delta,
)

__all__ = [
    "CaseBoundary",
    "PrecisionFloorWarning",
    "PrivacyPoint",
    "RenyiEvaluation",
    "RenyiWorstCase",
    "ZcdpBound",
    "boundary_delta",
    "delta_quadrature",
    "gaussian_delta",
    "gaussian_delta_via_renyi",
    "gaussian_rho",
    "loss_crossing",
    "osgt_delta",
    "osgt_delta_large_eps",
    "osgt_delta_small_eps",
    "osgt_delta_via_renyi",
    "osgt_renyi_closed_form",
    "osgt_renyi_k_dim",
    "osgt_renyi_worst_case",
    "osgt_zcdp",
    "pdf_moment",
    "renyi_quadrature",
    "renyi_to_delta",
]
