import json
from pathlib import Path

import pytest

from osgt_dp.rng import make_rng


@pytest.fixture(scope="session")
def reference():
    raw = json.loads((Path(__file__).parent / "fixtures" / "reference.json").read_text())
    return {k: float(v) for k, v in raw.items()}


@pytest.fixture
def rng():
    return make_rng(12345)
