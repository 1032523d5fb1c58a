"""
Log-determinants of K + sigma^2 I from eigenvalues.

``logdet_exact`` is exact when the eigenvalues are those of K itself.
``logdet_scaled`` approximates the n eigenvalues of K_SKI by the largest
eigenvalues of K_UU scaled by n / m.
"""

import numpy as np
from numpy.typing import ArrayLike

from ..core.exceptions import ValidationError


def _check_sigma2(sigma2: float) -> float:
    if not np.isfinite(sigma2) or sigma2 <= 0:
        raise ValidationError(f"sigma2 must be positive, got {sigma2}", field="sigma2", value=sigma2)
    return float(sigma2)


def logdet_exact(eigs: ArrayLike, sigma2: float) -> float:
    """sum_i log(max(lambda_i, 0) + sigma2); 0 for an empty list."""
    s2 = _check_sigma2(sigma2)
    lam = np.maximum(np.asarray(eigs, dtype=float).reshape(-1), 0.0)
    return float(np.sum(np.log(lam + s2)))


def logdet_scaled(kuu_eigs: ArrayLike, n: int, sigma2: float) -> float:
    """Scaled-eigenvalue approximation of log|K_SKI + sigma2 I|.

    Uses sum_{i <= min(n, m)} log((n / m) lambda_i + sigma2), plus
    (n - m) log(sigma2) when n > m.

    Args:
        kuu_eigs: The m eigenvalues of K_UU (any order; sorted here)
        n: Number of data points
        sigma2: Noise variance

    Raises:
        ValidationError: If sigma2 <= 0 or n < 0
    """
    s2 = _check_sigma2(sigma2)
    if n < 0:
        raise ValidationError(f"n must be non-negative, got {n}", field="n", value=n)
    lam = np.sort(np.maximum(np.asarray(kuu_eigs, dtype=float).reshape(-1), 0.0))[::-1]
    m = lam.shape[0]
    if m == 0:
        return float(n * np.log(s2))
    k = min(n, m)
    total = float(np.sum(np.log((n / m) * lam[:k] + s2)))
    return total + max(0, n - m) * float(np.log(s2))
