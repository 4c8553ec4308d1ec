import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from accelgeom.objectives import Quadratic, Quartic

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DEMO_H = np.array([[2.0, 1.0], [1.0, 3.0]])
DEMO_MU = (5 - np.sqrt(5)) / 2
DEMO_L = (5 + np.sqrt(5)) / 2


@pytest.fixture
def demo_quadratic():
    return Quadratic(DEMO_H)


@pytest.fixture
def demo_quartic():
    return Quartic(DEMO_H)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
