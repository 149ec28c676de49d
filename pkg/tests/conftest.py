import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from opint.rng import CounterRNG

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return CounterRNG(20240521)


def rel_err(X, Y):
    return np.linalg.norm(np.asarray(X) - np.asarray(Y)) / max(np.linalg.norm(Y), 1e-300)
