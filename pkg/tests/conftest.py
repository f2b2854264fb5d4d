import numpy as np
import pytest

from lbstates import FockCutoff, PhysicalParams


@pytest.fixture(scope="session")
def params():
    return PhysicalParams()


@pytest.fixture(scope="session")
def small_cutoff():
    return FockCutoff(4, 12, 10)


@pytest.fixture(scope="session")
def desk_cutoff():
    # the scale every acceptance suite runs at
    return FockCutoff(64, 64, 32)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240917)
