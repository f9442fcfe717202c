"""Frozen parameter presets and the data series behind each comparison figure.

Each builder returns a :class:`Table`; plotting is left to external tools.
Column sets are versioned by ``SCHEMA_VERSION``; bump it when a header
changes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import dist, special
from .account import (
    gaussian_delta,
    gaussian_delta_via_renyi,
    gaussian_rho,
    osgt_delta,
    osgt_delta_via_renyi,
    osgt_renyi_worst_case,
    osgt_zcdp,
)
from .dist import OsgtParams
from .errors import DomainError
from .mech import Sensitivity

SCHEMA_VERSION = 1


@dataclass
class Table:
    columns: list[str]
    rows: list[tuple]
    sci_columns: frozenset[str] = field(default_factory=frozenset)
    meta: dict[str, Any] = field(default_factory=dict)


PRESETS: dict[str, dict[str, Any]] = {
    "fig2": {"m": 3.0, "sigma2": 40.0, "y_min": -60.0, "y_max": 60.0, "y_step": 0.5},
    "fig3": {"ms": (2.0, 3.0), "sigma2_min": 1.0, "sigma2_max": 100.0, "sigma2_step": 1.0},
    "fig4a": {"m": 3.0, "sigma2": 40.0, "delta": 1.0, "eps_max": 2.0, "eps_step": 0.01},
    "fig4b": {"m": 2.0, "sigma2": 20.0, "delta": 1.0, "eps_max": 2.0, "eps_step": 0.01},
    "fig5": {"m": 3.0, "sigma2": 40.0, "delta": 1.0, "k": 1, "alpha_min": 1.05, "alpha_max": 100.0,
             "alpha_n": 100, "scan_n": 11},
    "fig6": {"m": 15.0, "sigma2": 630.0, "per_coord": 1.0, "k": 8, "eps_min": 0.1, "eps_max": 2.0,
             "eps_step": 0.05},
}


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    # integer steps so that presets hit values like eps = 1.0 exactly
    n = int(round((hi - lo) / step))
    return np.round(lo + step * np.arange(n + 1), 10)


def fig2(cfg: dict[str, Any]) -> Table:
    p = OsgtParams(cfg["m"], cfg["sigma2"])
    ref = dist.matched_references(p)
    y = _grid(cfg["y_min"], cfg["y_max"], cfg["y_step"])
    sf_g = special.q_function(y / math.sqrt(ref.sigma_g2))
    sf_l = np.where(y >= 0, 0.5 * np.exp(-y / ref.lam), 1.0 - 0.5 * np.exp(y / ref.lam))
    cols = [y, dist.pdf(p, y), dist.gaussian_pdf(ref.sigma_g2, y), dist.laplace_pdf(ref.lam, y),
            dist.sf(p, y), sf_g, sf_l]
    names = ["y", "pdf_osgt", "pdf_gaussian", "pdf_laplace", "sf_osgt", "sf_gaussian", "sf_laplace"]
    return Table(names, list(zip(*[c.tolist() for c in cols])),
                 frozenset(names[4:]), {"sigma_g2": ref.sigma_g2, "lambda": ref.lam})


def fig3(cfg: dict[str, Any]) -> Table:
    s2 = _grid(cfg["sigma2_min"], cfg["sigma2_max"], cfg["sigma2_step"])
    ms = cfg["ms"]
    rows = [(float(v), *(dist.variance(OsgtParams(m, float(v))) for m in ms)) for v in s2]
    names = ["sigma2"] + [f"variance_m{m:g}" for m in ms]
    return Table(names, rows)


def _fig4(cfg: dict[str, Any]) -> Table:
    p = OsgtParams(cfg["m"], cfg["sigma2"])
    sg2 = dist.variance(p)
    rows = []
    for e in _grid(0.0, cfg["eps_max"], cfg["eps_step"]):
        rows.append((float(e), osgt_delta(p, cfg["delta"], float(e)).delta,
                     gaussian_delta(sg2, cfg["delta"], float(e)).delta))
    return Table(["eps", "delta_osgt", "delta_gaussian"], rows,
                 frozenset({"delta_osgt", "delta_gaussian"}), {"sigma_g2": sg2})


def fig5(cfg: dict[str, Any]) -> Table:
    p = OsgtParams(cfg["m"], cfg["sigma2"])
    sg2 = dist.variance(p)
    d = cfg["delta"]
    rows = []
    for a in np.linspace(cfg["alpha_min"], cfg["alpha_max"], cfg["alpha_n"]):
        a = float(a)
        exact = osgt_renyi_worst_case(p, d, a, cfg["scan_n"]).evaluation.tau
        bound = osgt_zcdp(p, d, cfg["k"], a).bound
        rows.append((a, exact, bound, a * gaussian_rho(sg2, d)))
    return Table(["alpha", "renyi_osgt", "zcdp_bound_osgt", "renyi_gaussian"], rows, meta={"sigma_g2": sg2})


def fig6(cfg: dict[str, Any]) -> Table:
    p = OsgtParams(cfg["m"], cfg["sigma2"])
    s = Sensitivity.identical(cfg["per_coord"], cfg["k"])
    sg2 = dist.variance(p)
    rows = []
    for e in _grid(cfg["eps_min"], cfg["eps_max"], cfg["eps_step"]):
        t = osgt_delta_via_renyi(p, s, float(e))
        g = gaussian_delta_via_renyi(sg2, s.delta2, float(e))
        rows.append((float(e), t.delta, t.alpha, g.delta, g.alpha))
    return Table(["eps", "delta_osgt", "alpha_osgt", "delta_gaussian", "alpha_gaussian"], rows,
                 frozenset({"delta_osgt", "delta_gaussian"}), {"sigma_g2": sg2})


BUILDERS: dict[str, Callable[[dict[str, Any]], Table]] = {
    "fig2": fig2, "fig3": fig3, "fig4a": _fig4, "fig4b": _fig4, "fig5": fig5, "fig6": fig6,
}


def reproduce(figure: str, **overrides: Any) -> Table:
    """Build the data for ``figure`` from its preset, with optional overrides."""
    if figure not in BUILDERS:
        raise DomainError(f"unknown figure {figure!r}; choose from {', '.join(BUILDERS)}")
    cfg = dict(PRESETS[figure])
    for key, val in overrides.items():
        if val is None:
            continue
        if key not in cfg:
            raise DomainError(f"{figure} has no parameter {key!r}")
        cfg[key] = val
    table = BUILDERS[figure](cfg)
    table.meta = {"figure": figure, **{k: v for k, v in cfg.items() if not isinstance(v, tuple)}, **table.meta}
    return table
