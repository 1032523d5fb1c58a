"""Draws from the SKI prior with a Kronecker-factored Cholesky."""

from typing import List, Union

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from ..core.config import config
from ..core.validation import as_points
from ..interp.grid import ProductGrid
from ..interp.sparse import InterpScheme, build_W
from ..kernels.base import Kernel
from ..structla.kronecker import kron_matvec
from .linalg import stable_cholesky


def _grid_cholesky_factors(kernel: Kernel, grid: ProductGrid) -> List[np.ndarray]:
    """Per-axis Cholesky factors of K_d + jitter * k_d(0) I.

    A kernel that does not factorize gets one factor for the whole grid.
    """
    jitter = config.jitter.jitter
    if grid.input_dim == 1 or kernel.is_separable:
        factors = []
        for k_d, axis in zip(kernel.factors(), grid.axes):
            K = k_d.eval_matrix(axis)
            factors.append(stable_cholesky(K, scale=k_d.prior_variance, jitter=jitter))
        return factors
    K = kernel.eval_matrix(grid.points())
    return [stable_cholesky(K, scale=kernel.prior_variance, jitter=jitter)]


def sample_prior(
    X: ArrayLike,
    grid: ProductGrid,
    kernel: Kernel,
    seed: int = 0,
    count: int = 1,
    interp: Union[InterpScheme, str] = InterpScheme.CUBIC,
) -> np.ndarray:
    """Samples f = W [chol(K_1) (x) ... (x) chol(K_D)] nu with nu ~ N(0, I).

    Args:
        X: (n, D) inputs inside the grid
        grid: Inducing grid
        kernel: Prior kernel
        seed: Seed for nu
        count: Number of samples
        interp: Interpolation scheme for W

    Returns:
        (count, n) array of samples

    Raises:
        NotPositiveDefiniteError: If a factor is not PD after the jitter retry
    """
    pts = as_points(X, grid.input_dim)
    W = build_W(pts, grid, interp)
    factors = _grid_cholesky_factors(kernel, grid)
    rng = np.random.default_rng(seed)
    nu = rng.standard_normal((grid.m, int(count)))
    grid_values = kron_matvec(factors, nu)
    logger.debug(f"Drew {count} prior samples on {pts.shape[0]} inputs (m={grid.m})")
    return np.asarray(W.spmv(grid_values)).T
