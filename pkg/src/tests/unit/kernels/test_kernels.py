"""
Unit tests for the kernel families and the Toeplitz column helper.
"""

import numpy as np
import pytest
import scipy.linalg

from skigp.core.exceptions import DimensionError, StructureError, ValidationError
from skigp.kernels import (
    Hypers,
    ProductKernel,
    RBFKernel,
    SpectralMixtureKernel,
    toeplitz_column,
)


@pytest.mark.unit
class TestHypers:
    """Test the log-space hyperparameter vector."""

    def test_values_round_trip_through_log_space(self):
        hypers = Hypers.from_values(("a", "b", "c"), [2.0, -0.5, 3.0], (True, False, True))

        np.testing.assert_allclose(hypers.raw, [np.log(2.0), -0.5, np.log(3.0)])
        np.testing.assert_allclose(hypers.values, [2.0, -0.5, 3.0])
        assert hypers.value("b") == pytest.approx(-0.5)

    def test_non_positive_log_entry_rejected(self):
        with pytest.raises(ValidationError) as exc:
            Hypers.from_values(("lengthscale",), [0.0], (True,))
        assert exc.value.field == "lengthscale"

    def test_arity_mismatch_rejected(self):
        with pytest.raises(DimensionError):
            Hypers(("a", "b"), np.array([1.0]), (True, True))

    def test_raw_is_read_only(self):
        hypers = Hypers.from_values(("a",), [1.0], (True,))
        with pytest.raises(ValueError):
            hypers.raw[0] = 5.0

    def test_unknown_name(self):
        hypers = Hypers.from_values(("a",), [1.0], (True,))
        with pytest.raises(ValidationError):
            hypers.value("b")


@pytest.mark.unit
class TestRBFKernel:
    """Test the squared-exponential kernel."""

    def test_zero_lag_is_signal_variance(self):
        kernel = RBFKernel(2.0, 3.5)
        assert kernel.eval(0.7, 0.7) == pytest.approx(3.5)
        assert kernel.prior_variance == pytest.approx(3.5)

    def test_known_value(self):
        kernel = RBFKernel(2.0, 1.0)
        assert kernel.eval(0.0, 2.0) == pytest.approx(np.exp(-0.5))

    def test_symmetric(self, rbf):
        assert rbf.eval(0.3, 1.9) == rbf.eval(1.9, 0.3)

    def test_eval_matrix_matches_eval(self, rng):
        kernel = RBFKernel(0.7, 1.3, input_dim=2)
        X1 = rng.normal(size=(5, 2))
        X2 = rng.normal(size=(3, 2))
        K = kernel.eval_matrix(X1, X2)
        for i in range(5):
            for j in range(3):
                assert K[i, j] == pytest.approx(kernel.eval(X1[i], X2[j]), rel=1e-14)

    def test_gram_is_symmetric_psd(self, rng, rbf):
        X = rng.uniform(-3, 3, size=40)
        K = rbf.eval_matrix(X)
        np.testing.assert_allclose(K, K.T)
        eigs = np.linalg.eigvalsh(K)
        assert eigs.min() >= -1e-10 * eigs.max()

    def test_wrong_dimension(self, rbf):
        with pytest.raises(DimensionError):
            rbf.eval([0.0, 1.0], [0.0, 1.0])

    def test_with_raw_returns_new_kernel(self, rbf):
        raw = rbf.hypers.raw + np.log(2.0)
        scaled = rbf.with_raw(raw)
        assert scaled.lengthscale == pytest.approx(2.0)
        assert scaled.signal_variance == pytest.approx(2.0)
        assert rbf.lengthscale == pytest.approx(1.0)

    def test_factors_multiply_to_kernel(self, rng):
        kernel = RBFKernel(0.9, 2.0, input_dim=3)
        x, z = rng.normal(size=3), rng.normal(size=3)
        product = np.prod([f.eval(x[d], z[d]) for d, f in enumerate(kernel.factors())])
        assert product == pytest.approx(kernel.eval(x, z), rel=1e-12)


@pytest.mark.unit
class TestSpectralMixtureKernel:
    """Test the one-dimensional spectral mixture kernel."""

    def test_zero_lag_is_sum_of_weights(self, sm_kernel):
        assert sm_kernel.prior_variance == pytest.approx(1.0)

    def test_zero_mean_component_is_rbf(self):
        v = 0.02
        sm = SpectralMixtureKernel([1.5], [0.0], [v])
        rbf = RBFKernel(1.0 / (2.0 * np.pi * np.sqrt(v)), 1.5)
        tau = np.linspace(0, 10, 25)
        np.testing.assert_allclose(sm.profile(tau), rbf.profile(tau), rtol=1e-12)

    def test_profile_is_even(self, sm_kernel):
        tau = np.linspace(0, 4, 9)
        np.testing.assert_allclose(sm_kernel.profile(tau), sm_kernel.profile(-tau))

    def test_means_are_not_log_transformed(self):
        sm = SpectralMixtureKernel([1.0], [0.25], [0.1])
        assert sm.hypers.log_mask == (True, False, True)
        assert sm.hypers.raw[1] == pytest.approx(0.25)

    def test_component_lengths_must_agree(self):
        with pytest.raises(DimensionError):
            SpectralMixtureKernel([1.0, 1.0], [0.1], [0.1])

    def test_one_gradient_slice_per_hyperparameter(self, sm_kernel):
        assert sm_kernel.num_components == 2
        grads = sm_kernel.gradient_matrices(np.linspace(0, 3, 4))
        assert grads.shape == (3 * sm_kernel.num_components, 4, 4)

    def test_round_trip_through_pairs(self, sm_kernel):
        rebuilt = SpectralMixtureKernel.from_pairs(sm_kernel.to_pairs())
        np.testing.assert_allclose(rebuilt.hypers.raw, sm_kernel.hypers.raw, atol=1e-12)


@pytest.mark.unit
class TestProductKernel:
    """Test products of one-dimensional factors."""

    def test_eval_is_product_of_factors(self, product_kernel, rng):
        x, z = rng.normal(size=2), rng.normal(size=2)
        f1, f2 = product_kernel.factors()
        expected = f1.eval(x[0], z[0]) * f2.eval(x[1], z[1])
        assert product_kernel.eval(x, z) == pytest.approx(expected, rel=1e-14)

    def test_hyper_names_are_prefixed(self, product_kernel):
        assert product_kernel.hypers.names == (
            "d0.lengthscale",
            "d0.signal_variance",
            "d1.lengthscale",
            "d1.signal_variance",
        )

    def test_with_raw_splits_across_factors(self, product_kernel):
        raw = product_kernel.hypers.raw.copy()
        raw[2] = np.log(3.0)
        updated = product_kernel.with_raw(raw)
        assert updated.factors()[1].lengthscale == pytest.approx(3.0)
        assert updated.factors()[0].lengthscale == pytest.approx(1.2)

    def test_multidimensional_factor_rejected(self):
        with pytest.raises(ValidationError):
            ProductKernel([RBFKernel(1.0, input_dim=2)])

    def test_no_profile_in_two_dimensions(self, product_kernel):
        with pytest.raises(StructureError):
            product_kernel.profile([0.0, 1.0])


@pytest.mark.unit
class TestToeplitzColumn:
    """Test the first column of K_UU on equispaced grids."""

    def test_reproduces_gram_matrix(self, sm_kernel):
        axis = np.linspace(-2.0, 5.0, 30)
        column = toeplitz_column(sm_kernel, axis)
        np.testing.assert_allclose(
            scipy.linalg.toeplitz(column), sm_kernel.eval_matrix(axis), atol=1e-12
        )

    def test_single_point_grid(self, rbf):
        np.testing.assert_allclose(rbf.toeplitz_column([3.0]), [1.0])

    def test_irregular_grid_rejected(self, rbf):
        with pytest.raises(StructureError):
            toeplitz_column(rbf, [0.0, 1.0, 3.0, 4.0])

    def test_multidimensional_kernel_rejected(self, product_kernel):
        with pytest.raises(StructureError):
            toeplitz_column(product_kernel, np.linspace(0, 1, 5))


def _difference_matrices(kernel, X1, X2, h=1e-6):
    raw = kernel.hypers.raw
    out = []
    for i in range(raw.shape[0]):
        step = np.zeros_like(raw)
        step[i] = h
        upper = kernel.with_raw(raw + step).eval_matrix(X1, X2)
        lower = kernel.with_raw(raw - step).eval_matrix(X1, X2)
        out.append((upper - lower) / (2.0 * h))
    return np.stack(out)


@pytest.mark.unit
class TestGradientMatrices:
    """Closed-form derivatives against central differences."""

    @pytest.mark.parametrize(
        "kernel",
        [
            RBFKernel(0.7, 1.8),
            RBFKernel(1.3, 0.6, input_dim=2),
            SpectralMixtureKernel([0.6, 0.4], [0.1, 0.3], [0.01, 0.02]),
            ProductKernel([RBFKernel(1.2, 1.5), SpectralMixtureKernel([1.0], [0.2], [0.05])]),
        ],
        ids=["rbf", "rbf-2d", "sm", "product"],
    )
    def test_matches_differences(self, kernel, rng):
        X1 = rng.uniform(-3, 3, size=(7, kernel.input_dim))
        X2 = rng.uniform(-3, 3, size=(5, kernel.input_dim))
        grads = kernel.gradient_matrices(X1, X2)
        assert grads.shape == (len(kernel.hypers), 7, 5)
        np.testing.assert_allclose(grads, _difference_matrices(kernel, X1, X2), atol=1e-7)

    def test_profile_gradients_are_first_column(self, sm_kernel):
        lags = np.linspace(0.0, 4.0, 9)
        expected = sm_kernel.gradient_matrices(lags, np.zeros(1))[:, :, 0]
        np.testing.assert_allclose(sm_kernel.profile_gradients(lags), expected, atol=1e-14)

    def test_gradients_at_zero_lag(self):
        kernel = RBFKernel(0.9, 2.5)
        grads = kernel.gradient_matrices(np.zeros((1, 1)))
        # only the signal variance moves k(0)
        np.testing.assert_allclose(grads[:, 0, 0], [0.0, 2.5])


@pytest.mark.unit
class TestFactorHyperMap:
    """Where factor hyperparameters sit in the full raw vector."""

    def test_one_dimensional_kernel_maps_to_itself(self, sm_kernel):
        assert sm_kernel.factor_hyper_map() == [list(range(6))]

    def test_product_offsets(self, product_kernel):
        assert product_kernel.factor_hyper_map() == [[0, 1], [2, 3]]

    def test_rbf_shares_lengthscale(self):
        assert RBFKernel(1.0, input_dim=3).factor_hyper_map() == [[0, 1], [0, None], [0, None]]
