"""Seeded randomness.

All sampling goes through ``numpy.random.Generator`` backed by the
counter-based Philox4x64-10 bit generator, so a given seed yields the same
stream on every platform numpy supports.
"""

from __future__ import annotations

import os

import numpy as np

SEED_ENV = "OSGT_DP_SEED"


def make_rng(seed: int | None = None) -> np.random.Generator:
    if seed is None:
        env = os.environ.get(SEED_ENV)
        if env is not None:
            seed = int(env)
    return np.random.Generator(np.random.Philox(seed))
