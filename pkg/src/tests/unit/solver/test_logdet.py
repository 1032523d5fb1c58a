"""
Unit tests for log-determinant estimates.
"""

import numpy as np
import pytest

from skigp.core.exceptions import ValidationError
from skigp.solver import logdet_exact, logdet_scaled


@pytest.mark.unit
class TestLogdetExact:
    """Test the exact eigenvalue form."""

    def test_matches_slogdet(self, rng):
        A = rng.normal(size=(30, 30))
        K = A @ A.T
        sign, expected = np.linalg.slogdet(K + 0.3 * np.eye(30))
        assert sign > 0
        assert logdet_exact(np.linalg.eigvalsh(K), 0.3) == pytest.approx(expected, rel=1e-10)

    def test_negative_eigenvalues_clamped(self):
        assert logdet_exact([-1e-12, 1.0], 0.5) == pytest.approx(np.log(0.5) + np.log(1.5))

    def test_empty(self):
        assert logdet_exact([], 1.0) == 0.0

    @pytest.mark.parametrize("sigma2", [0.0, -1.0, np.nan])
    def test_requires_positive_noise(self, sigma2):
        with pytest.raises(ValidationError):
            logdet_exact([1.0], sigma2)


@pytest.mark.unit
class TestLogdetScaled:
    """Test the scaled-eigenvalue approximation."""

    def test_equals_exact_when_n_equals_m(self, rng):
        eigs = rng.uniform(0, 5, 40)
        assert logdet_scaled(eigs, 40, 0.1) == pytest.approx(logdet_exact(eigs, 0.1), rel=1e-12)

    def test_extra_noise_terms_when_n_exceeds_m(self):
        eigs = np.array([3.0, 1.0])
        expected = np.log(1.5 * 3.0 + 0.2) + np.log(1.5 * 1.0 + 0.2) + np.log(0.2)
        assert logdet_scaled(eigs, 3, 0.2) == pytest.approx(expected)

    def test_keeps_largest_eigenvalues_when_n_below_m(self):
        eigs = np.array([0.5, 4.0, 2.0, 1.0])
        expected = np.log(0.5 * 4.0 + 0.1) + np.log(0.5 * 2.0 + 0.1)
        assert logdet_scaled(eigs, 2, 0.1) == pytest.approx(expected)

    def test_no_inducing_points(self):
        assert logdet_scaled([], 4, 2.0) == pytest.approx(4 * np.log(2.0))

    def test_invalid_arguments(self):
        with pytest.raises(ValidationError):
            logdet_scaled([1.0], 3, 0.0)
        with pytest.raises(ValidationError):
            logdet_scaled([1.0], -1, 1.0)
