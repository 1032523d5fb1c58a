"""
Unit tests for the SKI engine.

Dense oracles are built from the model's own W and K_UU, so these tests check
the matrix-free algebra rather than the interpolation error.
"""

import numpy as np
import pytest
import scipy.stats

from skigp.core.exceptions import DimensionError, StructureError, ValidationError
from skigp.gp import (
    CrossCovariance,
    ExactGP,
    KuuStructure,
    LogdetMethod,
    SkiGP,
    SkiOperator,
    build_kuu,
    ski_apply,
)
from skigp.interp import build_W, kmeans_grid, padded_grid, regular_grid
from skigp.kernels import RBFKernel
from skigp.solver import CgConfig
from skigp.structla import DenseKuu, KroneckerKuu, ToeplitzKuu


@pytest.fixture
def problem(rng):
    X = rng.uniform(0, 10, 400)
    y = np.sin(X) + 0.3 * rng.normal(size=400)
    return X, y


def _dense_parts(model, Xs):
    K_ski = model.operator.to_dense()
    Ws = model.interpolation(Xs).to_dense()
    Kuu = model.Kuu.to_dense()
    return K_ski, Ws, Kuu


@pytest.mark.unit
class TestBuildKuu:
    """Test the structure selection for K_UU."""

    def test_regular_1d_is_toeplitz(self, rbf):
        grid = regular_grid([(0.0, 1.0)], [20])
        assert isinstance(build_kuu(rbf, grid), ToeplitzKuu)

    def test_irregular_1d_is_dense(self, rbf, rng):
        grid = kmeans_grid(rng.normal(size=100), [10])
        assert isinstance(build_kuu(rbf, grid), DenseKuu)

    def test_separable_2d_is_kronecker(self, product_kernel):
        grid = regular_grid([(0.0, 1.0), (0.0, 2.0)], [6, 7])
        Kuu = build_kuu(product_kernel, grid)
        assert isinstance(Kuu, KroneckerKuu)
        np.testing.assert_allclose(
            Kuu.to_dense(), product_kernel.eval_matrix(grid.points()), atol=1e-12
        )

    def test_forced_dense_matches_structured(self, rbf):
        grid = regular_grid([(0.0, 3.0)], [15])
        np.testing.assert_allclose(
            build_kuu(rbf, grid, "dense").to_dense(), build_kuu(rbf, grid).to_dense(), atol=1e-12
        )

    def test_toeplitz_needs_1d(self, product_kernel):
        grid = regular_grid([(0.0, 1.0), (0.0, 2.0)], [6, 7])
        with pytest.raises(StructureError):
            build_kuu(product_kernel, grid, KuuStructure.TOEPLITZ)

    def test_forced_dense_in_two_dimensions(self, product_kernel):
        grid = regular_grid([(0.0, 1.0), (0.0, 2.0)], [6, 7])
        Kuu = build_kuu(product_kernel, grid, "dense")
        assert isinstance(Kuu, DenseKuu)
        assert Kuu.m == 42

    def test_dimension_mismatch(self, product_kernel):
        with pytest.raises(DimensionError):
            build_kuu(product_kernel, regular_grid([(0.0, 1.0)], [5]))


@pytest.mark.unit
class TestSkiOperator:
    """Test the matrix-free K_SKI + sigma2 I."""

    def test_apply_matches_dense(self, rbf, rng):
        X = rng.uniform(0, 5, 60)
        grid = padded_grid(X, [40])
        W = build_W(X, grid, "cubic")
        Kuu = build_kuu(rbf, grid)
        op = SkiOperator(W, Kuu, 0.3)
        dense = W.to_dense() @ Kuu.to_dense() @ W.to_dense().T + 0.3 * np.eye(60)
        v = rng.normal(size=60)
        np.testing.assert_allclose(op.apply(v), dense @ v, atol=1e-10)
        np.testing.assert_allclose(ski_apply(op, v), op(v))
        np.testing.assert_allclose(op.to_dense(), dense, atol=1e-10)

    def test_size_mismatch(self, rbf, rng):
        grid = regular_grid([(0.0, 1.0)], [10])
        W = build_W(rng.uniform(0, 1, 5), grid, "linear")
        with pytest.raises(DimensionError):
            SkiOperator(W, build_kuu(rbf, regular_grid([(0.0, 1.0)], [11])), 0.1)
        with pytest.raises(DimensionError):
            SkiOperator(W, build_kuu(rbf, grid), 0.1).apply(np.ones(4))


@pytest.mark.unit
class TestSkiGP:
    """Test SKI training, prediction and the marginal likelihood."""

    def test_cg_solution_matches_dense_solve(self, problem):
        X, y = problem
        model = SkiGP(
            RBFKernel(1.0),
            0.1,
            grid=regular_grid([(-1.0, 11.0)], [200]),
            cg=CgConfig(tol=1e-10, max_iters=1000),
        ).fit(X, y)
        report = model.solve_report
        assert report.converged
        assert report.iterations <= 300
        expected = np.linalg.solve(model.operator.to_dense(), y)
        np.testing.assert_allclose(report.solution, expected, rtol=0, atol=1e-6 * np.abs(expected).max())

    def test_on_grid_inputs_match_exact_gp(self, rng):
        kernel = RBFKernel(0.8, 1.3)
        grid = regular_grid([(0.0, 10.0)], [101])
        nodes = rng.permutation(101)
        X, Xs = grid.axes[0][nodes[:60]], grid.axes[0][nodes[60:80]]
        y = np.cos(X) + 0.1 * rng.normal(size=60)
        exact = ExactGP(kernel, 0.1).fit(X, y)
        ski = SkiGP(kernel, 0.1, grid=grid, cg=CgConfig(tol=1e-11)).fit(X, y)
        np.testing.assert_allclose(ski.predict_mean(Xs), exact.predict_mean(Xs), atol=1e-6)
        np.testing.assert_allclose(ski.predict_variance(Xs), exact.predict_variance(Xs), atol=1e-6)
        assert ski.log_marginal_likelihood() == pytest.approx(exact.log_marginal_likelihood(), rel=1e-6)

    def test_predictions_match_dense_interpolated_form(self, rng):
        X = rng.uniform(0, 6, 80)
        y = np.sin(2 * X) + 0.1 * rng.normal(size=80)
        Xs = np.linspace(0.2, 5.8, 9)
        kernel = RBFKernel(0.7, 1.1)
        model = SkiGP(
            kernel, 0.05, mean=0.5, grid=padded_grid(X, [50]), cg=CgConfig(tol=1e-11)
        ).fit(X, y)
        K_ski, Ws, Kuu = _dense_parts(model, Xs)
        W = model.W.to_dense()
        cross = W @ Kuu @ Ws.T
        alpha = np.linalg.solve(K_ski, y - 0.5)
        np.testing.assert_allclose(model.predict_mean(Xs), cross.T @ alpha + 0.5, atol=1e-6)
        var = kernel.diag(Xs) - np.einsum("ij,ij->j", cross, np.linalg.solve(K_ski, cross))
        np.testing.assert_allclose(model.predict_variance(Xs), np.maximum(var, 0.0), atol=1e-6)

    def test_exact_cross_covariance_mode(self, rng):
        X = rng.uniform(0, 6, 80)
        y = np.sin(2 * X) + 0.1 * rng.normal(size=80)
        Xs = np.linspace(0.2, 5.8, 9)
        kernel = RBFKernel(0.7, 1.1)
        grid = padded_grid(X, [50])
        model = SkiGP(
            kernel, 0.05, grid=grid, cross_cov=CrossCovariance.EXACT, cg=CgConfig(tol=1e-11)
        ).fit(X, y)
        K_ski, Ws, _ = _dense_parts(model, Xs)
        cross = (Ws @ kernel.eval_matrix(grid.points(), X)).T
        alpha = np.linalg.solve(K_ski, y)
        np.testing.assert_allclose(model.predict_mean(Xs), cross.T @ alpha, atol=1e-6)
        var = kernel.diag(Xs) - np.einsum("ij,ij->j", cross, np.linalg.solve(K_ski, cross))
        np.testing.assert_allclose(model.predict_variance(Xs), np.maximum(var, 0.0), atol=1e-6)

    def test_exact_logdet_and_likelihood(self, problem):
        X, y = problem
        model = SkiGP(
            RBFKernel(1.0),
            0.1,
            grid=regular_grid([(-1.0, 11.0)], [150]),
            logdet=LogdetMethod.EXACT,
            cg=CgConfig(tol=1e-11),
        ).fit(X, y)
        dense = model.operator.to_dense()
        sign, logdet = np.linalg.slogdet(dense)
        assert sign > 0
        assert model.logdet_value() == pytest.approx(logdet, rel=1e-8)
        lml = scipy.stats.multivariate_normal(np.zeros(400), dense).logpdf(y)
        assert model.log_marginal_likelihood() == pytest.approx(lml, rel=1e-6)

    def test_scaled_logdet_on_grid_inputs(self):
        """Exact when the grid is the input lattice; refining the grid past it only adds error."""
        n = 200
        X = np.linspace(0.0, 20.0, n)
        y = np.sin(X)
        errors = {}
        for r in (1, 2, 4):
            grid = regular_grid([(0.0, 20.0)], [(n - 1) * r + 1])
            kwargs = dict(grid=grid, cg=CgConfig(tol=1e-8))
            exact = SkiGP(RBFKernel(1.0), 0.1, logdet="exact", **kwargs).fit(X, y)
            scaled = SkiGP(RBFKernel(1.0), 0.1, logdet="scaled", **kwargs).fit(X, y)
            reference = exact.logdet_value()
            errors[r] = abs(scaled.logdet_value() - reference) / abs(reference)
        assert errors[1] <= 1e-10 < errors[2] < errors[4] <= 0.01

    @pytest.mark.parametrize("m", [150, 300, 600])
    def test_scaled_logdet_off_grid(self, rng, m):
        """Random inputs: the scaled log-determinant tracks log|K_XX + sigma2 I|.

        The error comes from how unevenly the inputs cover the grid, so it is
        bounded across m rather than shrinking with it.
        """
        n = 300
        X = np.sort(rng.uniform(0.0, 20.0, n))
        kernel = RBFKernel(1.0)
        grid = regular_grid([(0.0, 20.0)], [m])
        model = SkiGP(kernel, 0.1, grid=grid, logdet="scaled").fit(X, np.sin(X))
        sign, reference = np.linalg.slogdet(kernel.eval_matrix(X) + 0.1 * np.eye(n))
        assert sign > 0
        assert abs(model.logdet_value() - reference) <= 0.1 * abs(reference)

    def test_product_kernel_in_two_dimensions(self, rng, product_kernel):
        X = rng.uniform(0, 3, size=(70, 2))
        y = np.sin(X[:, 0]) * np.cos(X[:, 1])
        grid = padded_grid(X, [20, 18])
        model = SkiGP(product_kernel, 0.05, grid=grid, cg=CgConfig(tol=1e-11)).fit(X, y)
        assert isinstance(model.Kuu, KroneckerKuu)
        K_ski, _, _ = _dense_parts(model, X[:3])
        np.testing.assert_allclose(
            model.solve_report.solution, np.linalg.solve(K_ski, y), atol=1e-6
        )

    def test_flags_non_convergence(self, problem):
        X, y = problem
        model = SkiGP(
            RBFKernel(1.0),
            1e-4,
            grid=regular_grid([(-1.0, 11.0)], [200]),
            cg=CgConfig(tol=1e-14, max_iters=2),
        ).fit(X, y)
        assert not model.solve_report.converged
        assert any("CG did not converge" in flag for flag in model.flags)

    def test_requires_grid(self, rbf):
        with pytest.raises(ValidationError):
            SkiGP(rbf, 0.1)

    def test_grid_dimension_mismatch(self, rbf):
        with pytest.raises(DimensionError):
            SkiGP(rbf, 0.1, grid=regular_grid([(0.0, 1.0), (0.0, 1.0)], [4, 4]))

    def test_clone_keeps_settings(self, problem):
        grid = regular_grid([(-1.0, 11.0)], [64])
        model = SkiGP(RBFKernel(1.0), 0.1, grid=grid, interp="linear", logdet="scaled")
        copy = model.clone(sigma2=0.2)
        assert copy.grid is grid
        assert copy.interp.value == "linear"
        assert copy.logdet is LogdetMethod.SCALED
        assert copy.m == 64
