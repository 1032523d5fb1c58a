"""
Tests for the kernel registry.
"""

import numpy as np
import pytest

from skigp.core.exceptions import ValidationError
from skigp.kernels import KernelRegistry, ProductKernel, RBFKernel, registry


def test_registry_initialization():
    """Test that a fresh registry is empty."""
    reg = KernelRegistry()
    assert len(reg.get_registered_families()) == 0


def test_default_registry_families():
    """Test the shared registry knows rbf and sm."""
    assert registry.has_family("rbf")
    assert registry.has_family("sm")
    assert not registry.has_family("matern")


def test_registration_and_unregistration():
    """Test registering and removing a family."""
    reg = KernelRegistry()
    reg.register("rbf", RBFKernel.from_pairs)
    reg.register("rbf", RBFKernel.from_pairs)  # Should override

    assert reg.get_registered_families() == ["rbf"]
    assert reg.unregister("rbf")
    assert not reg.unregister("rbf")


def test_build_rbf():
    kernel = registry.build("rbf", [("lengthscale", 2.0), ("signal_variance", 0.5)], input_dim=2)
    assert isinstance(kernel, RBFKernel)
    assert kernel.input_dim == 2
    assert kernel.lengthscale == pytest.approx(2.0)
    assert kernel.signal_variance == pytest.approx(0.5)


def test_build_product():
    kernel = registry.build(
        "product",
        factors=[
            ("rbf", [("lengthscale", 1.0)]),
            ("sm", [("weight_0", 1.0), ("mean_0", 0.2), ("variance_0", 0.05)]),
        ],
    )
    assert isinstance(kernel, ProductKernel)
    assert kernel.input_dim == 2


def test_unknown_family():
    with pytest.raises(ValidationError) as exc:
        registry.build("matern", [("lengthscale", 1.0)])
    assert exc.value.field == "family"


def test_missing_hyperparameter():
    with pytest.raises(ValidationError):
        registry.build("rbf", [("signal_variance", 1.0)])


def test_product_needs_factors():
    with pytest.raises(ValidationError):
        registry.build("product")


def test_describe_then_build(product_kernel, sm_kernel):
    """Test that describe is the inverse of build."""
    for kernel in (product_kernel, sm_kernel, RBFKernel(0.3, 2.0, input_dim=3)):
        family, pairs, input_dim, factors = registry.describe(kernel)
        rebuilt = registry.build(family, pairs, input_dim, factors)
        assert type(rebuilt) is type(kernel)
        np.testing.assert_allclose(rebuilt.hypers.raw, kernel.hypers.raw, rtol=1e-12, atol=1e-12)
