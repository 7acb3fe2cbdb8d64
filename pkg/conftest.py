import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from factories import create_specialization, create_symbolic_context
from scalar import tower_field


@pytest.fixture(scope="session")
def tower():
    return tower_field()


@pytest.fixture(scope="session")
def symbolic_ctx():
    return create_symbolic_context(cutoff=3)


@pytest.fixture(scope="session")
def ctx7():
    """A smooth specialization over F_49 with a pinned origin."""
    return create_specialization(7, seed=0, cutoff=5)


@pytest.fixture(scope="session")
def F49(ctx7):
    return ctx7.F


@pytest.fixture(scope="session")
def S7(ctx7):
    return ctx7.S


@pytest.fixture(scope="session")
def A7(ctx7):
    return ctx7.A


@pytest.fixture(scope="session")
def curve7(ctx7):
    return ctx7.curve


@pytest.fixture
def rng():
    return np.random.default_rng(0)
