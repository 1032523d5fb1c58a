"""Dense factorization helpers shared by the GP engines."""

from typing import Optional

import numpy as np
import scipy.linalg
from loguru import logger

from ..core.config import config
from ..core.exceptions import NotPositiveDefiniteError


def stable_cholesky(
    A: np.ndarray, scale: float, jitter: float = 0.0, retry_jitter: Optional[float] = None
) -> np.ndarray:
    """Lower Cholesky factor of A + jitter * scale * I, retrying once.

    Args:
        A: Symmetric matrix
        scale: Reference variance (usually k(0)) the jitter is relative to
        jitter: Relative jitter for the first attempt
        retry_jitter: Relative jitter for the single retry
            (defaults to ``config.jitter.retry_jitter``)

    Raises:
        NotPositiveDefiniteError: If the retry also fails
    """
    retry = config.jitter.retry_jitter if retry_jitter is None else retry_jitter
    eye = np.eye(A.shape[0])
    try:
        return scipy.linalg.cholesky(A + jitter * scale * eye, lower=True)
    except np.linalg.LinAlgError:
        logger.warning(f"Cholesky failed at size {A.shape[0]}; retrying with jitter {retry:g}")
    try:
        return scipy.linalg.cholesky(A + retry * scale * eye, lower=True)
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefiniteError(
            f"Matrix of size {A.shape[0]} is not positive definite even with jitter {retry:g}",
            jitter=retry * scale,
        ) from e


def solve_lower(L: np.ndarray, B: np.ndarray) -> np.ndarray:
    """L^{-1} B for lower-triangular L."""
    return scipy.linalg.solve_triangular(L, B, lower=True)


def chol_solve(L: np.ndarray, B: np.ndarray) -> np.ndarray:
    """(L L^T)^{-1} B."""
    return scipy.linalg.cho_solve((L, True), B)


def chol_logdet(L: np.ndarray) -> float:
    return float(2.0 * np.sum(np.log(np.diag(L))))
