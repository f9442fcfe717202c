"""Invariant and oracle-equivalence checks runnable from the CLI.

Each check raises ``AssertionError`` on failure and returns a short detail
string on success. :func:`run` times every check and never stops early.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from . import dist, special
from .account import (
    CaseBoundary,
    boundary_delta,
    delta_quadrature,
    gaussian_delta,
    osgt_delta,
    osgt_delta_large_eps,
    osgt_delta_small_eps,
    osgt_renyi_closed_form,
    osgt_renyi_worst_case,
    osgt_zcdp,
    pdf_moment,
    renyi_quadrature,
)
from .account.oracle import PrecisionFloorWarning
from .dist import OsgtParams
from .rng import make_rng

ORACLE_GRID = [(3.0, 40.0), (2.0, 20.0), (15.0, 630.0), (0.01, 1.0)]
DELTAS = [0.5, 1.0, 2.0]
EPS_GRID = [0.1, 0.5, 1.0, "star", 2.0, 5.0]
RENYI_ALPHAS = [1.5, 2.0, 5.0, 10.0, 50.0]
ZCDP_ALPHAS = [1.5, 2.0, 5.0, 10.0, 50.0, 100.0]
SHAPE_RATIOS = [0.01, 0.1, 0.4743, 0.6745, 1.0, 3.0]

DELTA_RTOL = 1e-6
DELTA_FLOOR = 1e-13
CONTINUITY_ATOL = 1e-12
RENYI_RTOL = 1e-8


@dataclass
class CheckResult:
    name: str
    passed: bool
    seconds: float
    detail: str


def _eps_values(p: OsgtParams, d: float):
    for e in EPS_GRID:
        yield CaseBoundary.of(p, d).eps_star if e == "star" else e


def check_q_symmetry() -> str:
    x = np.linspace(-40, 40, 8001)
    err = np.abs(special.q_function(x) + special.q_function(-x) - 1.0)
    assert np.all(err <= 2 * np.finfo(float).eps), f"max |Q(x)+Q(-x)-1| = {err.max():.3e}"
    return f"max composition error {err.max():.2e}"


def check_normalisation_and_variance() -> str:
    worst = 0.0
    for r in SHAPE_RATIOS:
        for s2 in (1.0, 40.0):
            p = OsgtParams(r * math.sqrt(s2), s2)
            mass = pdf_moment(p, 0)
            assert abs(mass - 1.0) <= 1e-9, f"mass {mass!r} at m/sigma={r}, s2={s2}"
            v = dist.variance(p)
            rel = abs(pdf_moment(p, 2) - v) / v
            assert rel <= 1e-8, f"variance rel err {rel:.2e} at m/sigma={r}"
            assert p.m == 0 or v < s2
            worst = max(worst, rel)
    return f"worst variance rel err {worst:.2e}"


def check_delta_oracle() -> str:
    worst = 0.0
    n = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PrecisionFloorWarning)
        for m, s2 in ORACLE_GRID:
            p = OsgtParams(m, s2)
            for d in DELTAS:
                for e in _eps_values(p, d):
                    exact = osgt_delta(p, d, e).delta
                    oracle = delta_quadrature(p, d, e)
                    scale = max(exact, DELTA_FLOOR)
                    dev = abs(exact - oracle) / scale
                    assert dev <= DELTA_RTOL, f"(m={m}, s2={s2}, D={d}, eps={e:.4g}): {exact!r} vs {oracle!r}"
                    worst = max(worst, dev)
                    n += 1
    return f"{n} points, worst scaled deviation {worst:.2e}"


def check_branch_continuity() -> str:
    worst = 0.0
    for m, s2 in ORACLE_GRID:
        p = OsgtParams(m, s2)
        for d in DELTAS:
            e = CaseBoundary.of(p, d).eps_star
            a = osgt_delta_small_eps(p, d, e)
            b = osgt_delta_large_eps(p, d, e)
            c = boundary_delta(p, d)
            gap = max(abs(a - b), abs(a - c), abs(b - c))
            assert gap <= CONTINUITY_ATOL, f"(m={m}, s2={s2}, D={d}): {a!r}, {b!r}, {c!r}"
            worst = max(worst, gap)
    return f"worst gap {worst:.2e}"


def check_renyi_oracle() -> str:
    worst = 0.0
    for m, s2 in ORACLE_GRID[:3]:
        p = OsgtParams(m, s2)
        for a in RENYI_ALPHAS:
            cf = osgt_renyi_closed_form(p, 1.0, a).tau
            qd = renyi_quadrature(p, 1.0, a)
            rel = abs(cf - qd) / abs(qd)
            assert rel <= RENYI_RTOL, f"(m={m}, s2={s2}, alpha={a}): {cf!r} vs {qd!r}"
            worst = max(worst, rel)
    return f"worst rel deviation {worst:.2e}"


def check_zcdp_dominance() -> str:
    for m, s2 in ORACLE_GRID[:3]:
        p = OsgtParams(m, s2)
        for a in ZCDP_ALPHAS:
            wc = osgt_renyi_worst_case(p, 1.0, a, 21)
            bound = osgt_zcdp(p, 1.0, 1, a).bound
            assert bound >= wc.evaluation.tau, f"(m={m}, alpha={a}): bound {bound} < tau {wc.evaluation.tau}"
            assert wc.at_endpoint, f"(m={m}, alpha={a}): worst case at d={wc.argmax}"
    return "bound dominates, worst case at the endpoint"


def check_gaussian_reduction() -> str:
    p = OsgtParams(1e-10, 40.0)
    worst = 0.0
    for d in DELTAS:
        for e in (0.01, 0.1, 0.5, 1.0):
            t = osgt_delta(p, d, e).delta
            g = gaussian_delta(40.0, d, e).delta
            rel = abs(t - g) / g
            assert rel <= 1e-6, f"D={d}, eps={e}: {t!r} vs {g!r}"
            worst = max(worst, rel)
    return f"worst rel deviation {worst:.2e}"


def check_sampler_ks(seeds=(1, 2, 3, 4, 5), n=100_000) -> str:
    p = OsgtParams(3.0, 40.0)
    passes = 0
    for seed in seeds:
        x, _ = dist.sample_n(p, n, make_rng(seed))
        if stats.kstest(x, lambda y: dist.cdf(p, y)).pvalue > 0.01:
            passes += 1
    assert passes >= len(seeds) - 1, f"KS passed for {passes}/{len(seeds)} seeds"
    return f"KS passed for {passes}/{len(seeds)} seeds"


CHECKS: list[tuple[str, Callable[[], str]]] = [
    ("q_symmetry", check_q_symmetry),
    ("normalisation_variance", check_normalisation_and_variance),
    ("delta_oracle", check_delta_oracle),
    ("branch_continuity", check_branch_continuity),
    ("renyi_oracle", check_renyi_oracle),
    ("zcdp_dominance", check_zcdp_dominance),
    ("gaussian_reduction", check_gaussian_reduction),
    ("sampler_ks", check_sampler_ks),
]


def run(checks=None) -> list[CheckResult]:
    results = []
    for name, fn in checks or CHECKS:
        t0 = time.perf_counter()
        try:
            detail, ok = fn(), True
        except AssertionError as exc:
            detail, ok = str(exc), False
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            detail, ok = f"{type(exc).__name__}: {exc}", False
        results.append(CheckResult(name, ok, time.perf_counter() - t0, detail))
    return results
