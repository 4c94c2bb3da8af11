import numpy as np
import pytest
from hypothesis import settings

from matineq.spectral import SymMatrix, jacobi_eigh

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session", autouse=True)
def _warm_jit():
    # compile (or load) the Jacobi kernel once so timings measure the math only
    jacobi_eigh(np.eye(2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def sym_from(rng, dim, scale=1.0):
    m = rng.standard_normal((dim, dim))
    return SymMatrix(scale * (m + m.T) / 2)
