"""
Unit tests for conjugate gradients.
"""

import numpy as np
import pytest

from skigp.core.exceptions import ValidationError
from skigp.solver import CgConfig, cg_solve


def _spd(rng, n, cond=100.0):
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return Q @ np.diag(np.geomspace(1.0, cond, n)) @ Q.T


@pytest.mark.unit
class TestCgSolve:
    """Test CG against dense solves."""

    def test_matches_dense_solve(self, rng):
        A = _spd(rng, 60)
        b = rng.normal(size=60)
        report = cg_solve(lambda v: A @ v, b, CgConfig(tol=1e-10, max_iters=500))
        expected = np.linalg.solve(A, b)
        assert report.converged
        assert report.residual <= 1e-10
        assert np.linalg.norm(report.solution - expected) / np.linalg.norm(expected) <= 1e-6

    def test_converged_means_true_residual_below_tol(self, rng):
        A = _spd(rng, 40, cond=1e4)
        b = rng.normal(size=40)
        report = cg_solve(lambda v: A @ v, b, CgConfig(tol=1e-9, max_iters=400))
        assert report.converged
        true = np.linalg.norm(b - A @ report.solution) / np.linalg.norm(b)
        assert true <= 1e-9

    def test_zero_rhs(self):
        report = cg_solve(lambda v: 2.0 * v, np.zeros(7))
        assert report.converged
        assert report.iterations == 0
        np.testing.assert_array_equal(report.solution, np.zeros(7))

    def test_iteration_cap_is_reported_not_raised(self, rng):
        A = _spd(rng, 30, cond=1e3)
        b = rng.normal(size=30)
        report = cg_solve(lambda v: A @ v, b, CgConfig(tol=1e-12, max_iters=1))
        assert not report.converged
        assert report.iterations == 1
        assert report.residual > 1e-12

    def test_breakdown_on_indefinite_operator(self, rng):
        report = cg_solve(lambda v: -v, rng.normal(size=5))
        assert not report.converged
        assert report.iterations == 0

    def test_warm_start_at_solution(self, rng):
        A = _spd(rng, 20)
        b = rng.normal(size=20)
        x = np.linalg.solve(A, b)
        report = cg_solve(lambda v: A @ v, b, CgConfig(tol=1e-8), x0=x)
        assert report.converged
        assert report.iterations == 0

    def test_trace_records_every_iteration(self, rng):
        A = _spd(rng, 25)
        report = cg_solve(lambda v: A @ v, rng.normal(size=25), CgConfig(tol=1e-10))
        assert len(report.trace) >= report.iterations + 1
        assert report.trace[0] == pytest.approx(1.0)

    def test_identity_converges_in_one_step(self, rng):
        report = cg_solve(lambda v: v, rng.normal(size=10))
        assert report.converged
        assert report.iterations == 1


@pytest.mark.unit
class TestCgConfig:
    """Test CgConfig validation."""

    @pytest.mark.parametrize(
        "kwargs",
        [{"tol": 0.0}, {"tol": -1.0}, {"max_iters": 0}, {"residual_refresh": 0}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            CgConfig(**kwargs)

    def test_defaults_follow_global_config(self, restore_config):
        from skigp.core.config import config

        config.solver.cg_tol = 1e-6
        assert CgConfig().tol == 1e-6
