"""
Unit tests for prior sampling on an inducing grid.
"""

import numpy as np
import pytest

from skigp.gp import sample_prior
from skigp.interp import build_W, regular_grid
from skigp.kernels import ProductKernel, RBFKernel


@pytest.mark.unit
class TestSamplePrior:
    """Test W chol(K_UU) nu draws."""

    def test_shape_and_determinism(self, rbf):
        grid = regular_grid([(0.0, 5.0)], [40])
        X = np.linspace(0.1, 4.9, 25)
        a = sample_prior(X, grid, rbf, seed=11, count=3)
        b = sample_prior(X, grid, rbf, seed=11, count=3)
        assert a.shape == (3, 25)
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, sample_prior(X, grid, rbf, seed=12, count=3))

    def test_covariance_matches_interpolated_kernel(self):
        kernel = RBFKernel(0.8, 2.0)
        grid = regular_grid([(0.0, 4.0)], [30])
        X = np.array([0.3, 1.1, 1.7, 2.9, 3.6])
        samples = sample_prior(X, grid, kernel, seed=5, count=10_000)
        W = build_W(X, grid, "cubic").to_dense()
        expected = W @ kernel.eval_matrix(grid.axes[0]) @ W.T
        empirical = np.cov(samples, rowvar=False)
        std_err = np.sqrt((np.outer(np.diag(expected), np.diag(expected)) + expected**2) / 10_000)
        assert np.all(np.abs(empirical - expected) <= 5 * std_err)

    def test_two_dimensional_kronecker_draws(self, rng):
        kernel = ProductKernel([RBFKernel(1.0), RBFKernel(0.5)])
        grid = regular_grid([(0.0, 2.0), (0.0, 1.0)], [12, 10])
        X = rng.uniform([0.0, 0.0], [2.0, 1.0], size=(15, 2))
        samples = sample_prior(X, grid, kernel, seed=0, count=2, interp="linear")
        assert samples.shape == (2, 15)
        assert np.all(np.isfinite(samples))

    def test_nearly_singular_kernel(self):
        # lengthscale far beyond the span makes K_UU numerically rank one
        kernel = RBFKernel(500.0, 1.0)
        grid = regular_grid([(0.0, 1.0)], [50])
        samples = sample_prior(np.linspace(0, 1, 20), grid, kernel, seed=3, count=4)
        assert np.all(np.isfinite(samples))
        spread = samples.max(axis=1) - samples.min(axis=1)
        assert np.all(spread < 0.05)
