import os
import pathlib

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def ref_cache_dir():
    """Shared on-disk cache for reference solutions across acceptance tests.

    Defaults to a directory inside the repo so repeated pytest runs reuse the
    expensive reference trajectories; override with EWINLSE_TEST_CACHE.
    """
    path = pathlib.Path(
        os.environ.get("EWINLSE_TEST_CACHE", pathlib.Path(__file__).parent / "_refcache")
    )
    path.mkdir(parents=True, exist_ok=True)
    return path


def random_field(grid, rng, decay: float = 0.0, scale: float = 1.0):
    """Random SpectralField, optionally with algebraically decaying modes."""
    from ewinlse.spectral import SpectralField

    c = rng.standard_normal(grid.N) + 1j * rng.standard_normal(grid.N)
    if decay > 0:
        ls = np.abs(np.arange(-grid.N // 2, grid.N // 2)).astype(float)
        c = c / (1.0 + ls) ** decay
    return SpectralField(grid, scale * c)
