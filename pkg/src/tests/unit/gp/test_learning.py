"""
Unit tests for marginal-likelihood hyperparameter learning.
"""

import dataclasses

import numpy as np
import pytest

from skigp.core.config import config
from skigp.core.exceptions import SkiGPError, ValidationError
from skigp.gp import FITCGP, ExactGP, SkiGP, learn_hypers
from skigp.interp import regular_grid
from skigp.kernels import RBFKernel


@pytest.fixture
def smooth_data(rng):
    X = np.sort(rng.uniform(0, 10, 60))
    y = np.sin(X) + 0.1 * rng.normal(size=60)
    return X, y


@pytest.mark.unit
class TestLearnHypers:
    """Test the optimizer loop on small exact models."""

    def test_likelihood_improves(self, smooth_data):
        X, y = smooth_data
        model = ExactGP(RBFKernel(4.0, 0.3), 0.5)
        cfg = dataclasses.replace(config.learning, max_iters=30)
        result = learn_hypers(model, X, y, cfg)
        assert result.log_marginal_likelihood > result.trace[0]
        assert result.model.is_fitted
        assert result.sigma2 < 0.5
        assert result.iterations == len(result.trace) - 1

    def test_best_trace_is_nondecreasing(self, smooth_data):
        X, y = smooth_data
        cfg = dataclasses.replace(config.learning, max_iters=15)
        result = learn_hypers(ExactGP(RBFKernel(3.0), 0.4), X, y, cfg)
        assert len(result.best_trace) == len(result.trace)
        assert np.all(np.diff(result.best_trace) >= 0)
        assert result.log_marginal_likelihood == pytest.approx(result.best_trace[-1])

    def test_budget_is_flagged_not_raised(self, smooth_data):
        X, y = smooth_data
        model = ExactGP(RBFKernel(2.0), 0.3)
        cfg = dataclasses.replace(config.learning, max_evaluations=3)
        result = learn_hypers(model, X, y, cfg)
        assert result.evaluations == 3
        assert not result.converged
        assert any("budget" in flag for flag in result.flags)
        assert result.kernel.lengthscale == pytest.approx(2.0, rel=1e-3)
        assert result.sigma2 == pytest.approx(0.3, rel=1e-3)

    def test_non_finite_start_raises(self):
        X = np.linspace(0, 1, 10)
        y = np.full(10, 1e200)
        with pytest.raises(SkiGPError):
            learn_hypers(ExactGP(RBFKernel(1.0), 0.1), X, y)

    def test_ski_models_learn_with_inference_settings_kept(self, smooth_data):
        X, y = smooth_data
        grid = regular_grid([(-1.0, 11.0)], [100])
        model = SkiGP(RBFKernel(2.0), 0.3, grid=grid)
        cfg = dataclasses.replace(config.learning, max_iters=5)
        result = learn_hypers(model, X, y, cfg)
        assert result.model.cg == model.cg
        assert result.model.grid is grid


@pytest.mark.unit
@pytest.mark.slow
def test_recovers_rbf_lengthscale_with_ski():
    """SKI learning recovers the generating lengthscale to within 20%."""
    rng = np.random.default_rng(7)
    true = RBFKernel(1.5, 1.0)
    X = np.sort(rng.uniform(0, 50, 500))
    K = true.eval_matrix(X) + 0.05 * np.eye(500)
    y = np.linalg.cholesky(K) @ rng.normal(size=500)
    grid = regular_grid([(-1.0, 51.0)], [512])
    start = SkiGP(RBFKernel(3.0, 0.5), 0.3, mean=None, grid=grid)
    cfg = dataclasses.replace(config.learning, max_iters=60)
    result = learn_hypers(start, X, y, cfg)
    assert result.kernel.lengthscale == pytest.approx(1.5, rel=0.2)


@pytest.mark.unit
class TestGradientSource:
    """Central differences by default; closed forms on request where available."""

    def test_default_is_central_differences(self, smooth_data):
        X, y = smooth_data
        cfg = dataclasses.replace(config.learning, max_iters=1)
        result = learn_hypers(ExactGP(RBFKernel(2.0), 0.3), X, y, cfg)
        assert result.gradient == "difference"
        # one fit per stencil point on top of the start
        assert result.evaluations >= 1 + 2 * 3

    def test_exact_and_ski_use_closed_form_on_request(self, smooth_data):
        X, y = smooth_data
        cfg = dataclasses.replace(config.learning, max_iters=3, gradient="analytic")
        grid = regular_grid([(-1.0, 11.0)], [80])
        for model in (ExactGP(RBFKernel(2.0), 0.3), SkiGP(RBFKernel(2.0), 0.3, grid=grid)):
            result = learn_hypers(model, X, y, cfg)
            assert result.gradient == "analytic"
            assert result.log_marginal_likelihood >= result.trace[0]

    def test_closed_form_budget_counts_one_fit_per_point(self, smooth_data):
        X, y = smooth_data
        cfg = dataclasses.replace(config.learning, max_evaluations=2, gradient="analytic")
        result = learn_hypers(ExactGP(RBFKernel(2.0), 0.3), X, y, cfg)
        assert result.evaluations == 2
        assert any("budget" in flag for flag in result.flags)

    def test_fitc_falls_back_to_differences(self, smooth_data):
        X, y = smooth_data
        model = FITCGP(RBFKernel(2.0), 0.3, inducing=np.linspace(0, 10, 15)[:, None])
        cfg = dataclasses.replace(config.learning, max_iters=2, gradient="analytic")
        assert learn_hypers(model, X, y, cfg).gradient == "difference"

    def test_unknown_source_rejected(self, smooth_data):
        X, y = smooth_data
        cfg = dataclasses.replace(config.learning, gradient="adjoint")
        with pytest.raises(ValidationError):
            learn_hypers(ExactGP(RBFKernel(2.0), 0.3), X, y, cfg)
