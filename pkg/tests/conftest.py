import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import FIXTURE_DIR, make_toy_problem


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def toy_problem():
    return make_toy_problem(4, 2)


@pytest.fixture
def fixture_dir():
    return FIXTURE_DIR
