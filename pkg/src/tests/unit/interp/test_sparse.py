"""
Unit tests for the sparse interpolation matrix W.
"""

import numpy as np
import pytest

from skigp.core.exceptions import DimensionError, OutOfRangeError, StructureError
from skigp.gp import SkiOperator, build_kuu
from skigp.interp import (
    InterpScheme,
    build_W,
    kmeans_grid,
    regular_grid,
    spmv,
    spmv_t,
)
from skigp.kernels import RBFKernel


@pytest.mark.unit
class TestBuildW:
    """Test construction of W on product grids."""

    @pytest.mark.parametrize("scheme,per_dim", [("linear", 2), ("cubic", 4), ("idw", 2)])
    def test_constant_nonzeros_per_row(self, rng, scheme, per_dim):
        grid = regular_grid([(-3.0, 3.0), (-3.0, 3.0)], [10, 12])
        X = rng.uniform(-3, 3, size=(50, 2))
        X[0] = grid.points()[7]  # node-coincident row keeps its explicit zeros
        W = build_W(X, grid, scheme)
        assert W.shape == (50, 120)
        assert W.nnz_per_row == per_dim**2
        np.testing.assert_array_equal(np.diff(W.matrix.indptr), per_dim**2)

    @pytest.mark.parametrize("scheme", list(InterpScheme))
    def test_rows_sum_to_one(self, rng, scheme):
        grid = regular_grid([(0.0, 5.0)], [20])
        W = build_W(rng.uniform(0, 5, 100), grid, scheme)
        np.testing.assert_allclose(W.row_sums(), 1.0, atol=1e-13)

    def test_tensor_product_reproduces_bilinear_function(self, rng):
        grid = regular_grid([(0.0, 1.0), (0.0, 2.0)], [6, 9])
        X = rng.uniform([0.0, 0.0], [1.0, 2.0], size=(40, 2))
        U = grid.points()
        f = lambda P: 2.0 * P[:, 0] - 3.0 * P[:, 1] + P[:, 0] * P[:, 1]  # noqa: E731
        W = build_W(X, grid, "linear")
        np.testing.assert_allclose(W.spmv(f(U)), f(X), atol=1e-12)

    def test_cubic_needs_equispaced_grid(self, rng):
        X = rng.normal(size=200)
        grid = kmeans_grid(X, [15])
        with pytest.raises(StructureError):
            build_W(X, grid, "cubic")
        assert build_W(X, grid, "idw").shape == (200, grid.m)

    def test_inputs_outside_grid(self):
        grid = regular_grid([(0.0, 1.0)], [5])
        with pytest.raises(OutOfRangeError):
            build_W([0.5, 1.2], grid, "linear")

    def test_unknown_scheme(self):
        grid = regular_grid([(0.0, 1.0)], [5])
        with pytest.raises(ValueError):
            build_W([0.5], grid, "quintic")


@pytest.mark.unit
class TestSparseWeights:
    """Test products and export of W."""

    @pytest.fixture
    def weights(self, rng):
        grid = regular_grid([(0.0, 4.0)], [9])
        return build_W(rng.uniform(0, 4, 15), grid, "cubic")

    def test_spmv_matches_dense(self, weights, rng):
        v = rng.normal(size=9)
        np.testing.assert_allclose(weights.spmv(v), weights.to_dense() @ v, atol=1e-14)
        np.testing.assert_allclose(spmv(weights, v), weights.spmv(v))

    def test_spmv_t_matches_dense(self, weights, rng):
        v = rng.normal(size=15)
        np.testing.assert_allclose(weights.spmv_t(v), weights.to_dense().T @ v, atol=1e-14)
        np.testing.assert_allclose(spmv_t(weights, v), weights.spmv_t(v))

    def test_block_products(self, weights, rng):
        V = rng.normal(size=(9, 3))
        np.testing.assert_allclose(weights.spmv(V), weights.to_dense() @ V, atol=1e-14)

    def test_dimension_mismatch(self, weights):
        with pytest.raises(DimensionError):
            weights.spmv(np.ones(15))
        with pytest.raises(DimensionError):
            weights.spmv_t(np.ones(9))

    def test_products_are_reproducible(self, weights, rng):
        v = rng.normal(size=9)
        assert np.array_equal(weights.spmv(v), weights.spmv(v))

    def test_export_triplets(self, weights, tmp_path):
        path = weights.export_triplets(tmp_path / "w.txt")
        lines = path.read_text().splitlines()
        assert lines[0] == "# 15 9 60"
        assert len(lines) == 61
        r, c, v = lines[1].split()
        assert weights.to_dense()[int(r), int(c)] == float(v)


@pytest.mark.unit
class TestOnGridExactness:
    """With inputs on grid nodes, W K_UU W^T reproduces K_XX."""

    @pytest.mark.parametrize("scheme", ["linear", "cubic", "idw"])
    def test_node_inputs(self, rng, scheme):
        kernel = RBFKernel(0.8, 1.7)
        grid = regular_grid([(0.0, 10.0)], [101])
        X = grid.axes[0][rng.choice(101, size=60, replace=False)]
        X = np.append(X, [0.0, 10.0])
        op = SkiOperator(build_W(X, grid, scheme), build_kuu(kernel, grid), 0.0)
        np.testing.assert_allclose(op.kski_dense(), kernel.eval_matrix(X), rtol=0, atol=1e-10)

    def test_node_inputs_two_dimensions(self, rng):
        kernel = RBFKernel(1.1, 1.0, input_dim=2)
        grid = regular_grid([(0.0, 4.0), (-1.0, 1.0)], [9, 11])
        X = grid.points()[rng.choice(grid.m, size=40, replace=False)]
        op = SkiOperator(build_W(X, grid, "cubic"), build_kuu(kernel, grid), 0.0)
        np.testing.assert_allclose(op.kski_dense(), kernel.eval_matrix(X), rtol=0, atol=1e-10)
