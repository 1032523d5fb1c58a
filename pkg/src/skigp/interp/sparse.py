"""
Sparse interpolation matrix W with K_XU ~= W K_UU.

Row i of W is the tensor product of the per-dimension weight vectors for
input x_i, so it holds exactly c**D stored entries (c = 2 for linear and IDW,
c = 4 for cubic). Zero-valued weights at node-coincident inputs are kept as
stored entries so the per-row count never varies.
"""

from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np
import scipy.sparse
from loguru import logger
from numpy.typing import ArrayLike

from ..core.exceptions import DimensionError, StructureError
from ..core.validation import as_points
from .grid import ProductGrid
from .weights import cubic_weights, idw_weights, linear_weights


class InterpScheme(str, Enum):
    """Local interpolation strategies."""

    LINEAR = "linear"
    CUBIC = "cubic"
    IDW = "idw"

    @property
    def stencil(self) -> int:
        """Nonzeros per row per dimension."""
        return 4 if self is InterpScheme.CUBIC else 2


class SparseWeights:
    """Immutable row-sparse n x m interpolation matrix.

    Products are computed row by row in a fixed order, so results are
    bitwise reproducible.
    """

    def __init__(self, matrix: scipy.sparse.csr_matrix, nnz_per_row: int):
        self._matrix = scipy.sparse.csr_matrix(matrix)
        self._nnz_per_row = int(nnz_per_row)

    @property
    def n_rows(self) -> int:
        return self._matrix.shape[0]

    @property
    def n_cols(self) -> int:
        return self._matrix.shape[1]

    @property
    def shape(self):
        return self._matrix.shape

    @property
    def nnz_per_row(self) -> int:
        return self._nnz_per_row

    @property
    def matrix(self) -> scipy.sparse.csr_matrix:
        """Underlying CSR matrix (do not modify)."""
        return self._matrix

    def spmv(self, v: ArrayLike) -> np.ndarray:
        """W v for v of length m (or an (m, k) block).

        Raises:
            DimensionError: If v does not have m rows
        """
        arr = np.asarray(v, dtype=float)
        if arr.shape[0] != self.n_cols:
            raise DimensionError(
                f"spmv expects {self.n_cols} rows, got {arr.shape[0]}", field="v"
            )
        return self._matrix @ arr

    def spmv_t(self, v: ArrayLike) -> np.ndarray:
        """W^T v for v of length n (or an (n, k) block).

        Raises:
            DimensionError: If v does not have n rows
        """
        arr = np.asarray(v, dtype=float)
        if arr.shape[0] != self.n_rows:
            raise DimensionError(
                f"spmv_t expects {self.n_rows} rows, got {arr.shape[0]}", field="v"
            )
        return self._matrix.T @ arr

    def to_dense(self) -> np.ndarray:
        return self._matrix.toarray()

    def row_sums(self) -> np.ndarray:
        return np.asarray(self._matrix.sum(axis=1)).reshape(-1)

    def export_triplets(self, path: Union[str, Path]) -> Path:
        """Write ``row col value`` lines for cross-checking against other tools."""
        path = Path(path)
        coo = self._matrix.tocoo()
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"# {self.n_rows} {self.n_cols} {coo.nnz}\n")
            for r, c, v in zip(coo.row, coo.col, coo.data):
                f.write(f"{r} {c} {v:.17g}\n")
        logger.debug(f"Exported {coo.nnz} interpolation weights to {path}")
        return path


def spmv(W: SparseWeights, v: ArrayLike) -> np.ndarray:
    """Functional form of :meth:`SparseWeights.spmv`."""
    return W.spmv(v)


def spmv_t(W: SparseWeights, v: ArrayLike) -> np.ndarray:
    """Functional form of :meth:`SparseWeights.spmv_t`."""
    return W.spmv_t(v)


def _axis_weights(x: np.ndarray, axis: np.ndarray, scheme: InterpScheme, idw_power):
    if scheme is InterpScheme.LINEAR:
        return linear_weights(x, axis)
    if scheme is InterpScheme.CUBIC:
        return cubic_weights(x, axis)
    return idw_weights(x, axis, idw_power)


def build_W(
    X: ArrayLike,
    grid: ProductGrid,
    scheme: Union[InterpScheme, str] = InterpScheme.CUBIC,
    idw_power: Optional[float] = None,
) -> SparseWeights:
    """Build the sparse interpolation matrix for inputs X on a product grid.

    Args:
        X: (n, D) inputs inside the grid's bounding box
        grid: Inducing-point grid with D axes
        scheme: "linear", "cubic" or "idw"
        idw_power: Shepard exponent for the IDW scheme

    Returns:
        n x m SparseWeights with c**D entries per row

    Raises:
        OutOfRangeError: If an input lies outside the grid
        StructureError: If cubic is requested on a non-equispaced axis
    """
    scheme = InterpScheme(scheme)
    pts = as_points(X, grid.input_dim)
    if scheme is InterpScheme.CUBIC and not all(grid.equispaced_flags):
        raise StructureError("Cubic interpolation needs an equispaced grid on every axis")
    n = pts.shape[0]

    idx, w = _axis_weights(pts[:, 0], grid.axes[0], scheme, idw_power)
    for d in range(1, grid.input_dim):
        idx_d, w_d = _axis_weights(pts[:, d], grid.axes[d], scheme, idw_power)
        size_d = grid.shape[d]
        idx = (idx[:, :, None] * size_d + idx_d[:, None, :]).reshape(n, -1)
        w = (w[:, :, None] * w_d[:, None, :]).reshape(n, -1)

    nnz = idx.shape[1]
    indptr = np.arange(0, n * nnz + 1, nnz)
    matrix = scipy.sparse.csr_matrix(
        (w.reshape(-1), idx.reshape(-1), indptr), shape=(n, grid.m)
    )
    logger.debug(f"Built W ({n} x {grid.m}, {scheme.value}, {nnz} entries per row)")
    return SparseWeights(matrix, nnz)
