"""Shared fixtures: seeded generators and small kernels."""

import numpy as np
import pytest

from skigp.core.config import config
from skigp.kernels import ProductKernel, RBFKernel, SpectralMixtureKernel


@pytest.fixture
def rng():
    """Seeded random generator; every test gets a fresh stream."""
    return np.random.default_rng(1234)


@pytest.fixture
def rbf():
    return RBFKernel(lengthscale=1.0, signal_variance=1.0)


@pytest.fixture
def sm_kernel():
    return SpectralMixtureKernel([0.6, 0.4], [0.1, 0.3], [0.01, 0.02])


@pytest.fixture
def product_kernel():
    return ProductKernel([RBFKernel(1.2, 1.5), RBFKernel(0.8)])


@pytest.fixture
def restore_config():
    """Snapshot the global configuration and restore it after the test."""
    saved = config.to_dict()
    yield config
    for section, values in saved.items():
        target = getattr(config, section)
        for key, value in values.items():
            setattr(target, key, value)
