import numpy as np
import pytest

import greymatch as gm
from greymatch import repro


@pytest.fixture
def water_train():
    return repro.water_series()


@pytest.fixture
def water_full():
    return repro.water_full_series()


@pytest.fixture
def sim_system():
    """True system of the two-dimensional simulation study."""
    return np.array(repro.SIM_A), np.array(repro.SIM_ETA)


def make_stable_system(rng, d):
    """Random system matrix with spectral abscissa below 0.5."""
    a = rng.normal(scale=0.4, size=(d, d))
    shift = max(np.linalg.eigvals(a).real.max() - 0.4, 0.0)
    return a - shift * np.eye(d)


@pytest.fixture
def stable_system_factory():
    return make_stable_system


def positive_series(rng, n, d, t_step=1.0, t0=1.0):
    """Random strictly positive series on a uniform grid."""
    values = rng.normal(loc=8.0, scale=1.5, size=(n, d))
    values = np.abs(values) + 1.0
    return gm.make_series(t0 + t_step * np.arange(n), values)


@pytest.fixture
def positive_series_factory():
    return positive_series
