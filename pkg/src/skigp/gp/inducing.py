"""
Inducing-point baselines: subset of regressors (SoR) and FITC.

Both replace K_XX by Q_XX = K_XU K_UU^{-1} K_UX; FITC additionally restores
the exact diagonal. Training algebra uses V = L_UU^{-1} K_UX and a diagonal
noise term Lambda so that every solve is m x m (O(m^2 n) overall):

    (Q_XX + Lambda)^{-1} = Lambda^{-1} - Lambda^{-1} V^T A^{-1} V Lambda^{-1},
    A = I + V Lambda^{-1} V^T.
"""

from typing import Any, Dict, Optional

import numpy as np
from numpy.typing import ArrayLike

from ..core.config import config
from ..core.exceptions import ValidationError
from ..core.validation import as_points
from ..kernels.base import Kernel
from .base import GpModel, gaussian_lml
from .linalg import chol_logdet, chol_solve, solve_lower, stable_cholesky


def jittered_kuu(kernel: Kernel, U: ArrayLike) -> np.ndarray:
    """K_UU + jitter * k(0) * I with the configured jitter."""
    pts = as_points(U, kernel.input_dim, name="U")
    return kernel.eval_matrix(pts) + config.jitter.jitter * kernel.prior_variance * np.eye(
        pts.shape[0]
    )


def _kuu_cholesky(kernel: Kernel, U: np.ndarray) -> np.ndarray:
    return stable_cholesky(
        kernel.eval_matrix(U), scale=kernel.prior_variance, jitter=config.jitter.jitter
    )


def _check_inducing(kernel: Kernel, U: ArrayLike) -> np.ndarray:
    pts = as_points(U, kernel.input_dim, name="U")
    if pts.shape[0] == 0:
        raise ValidationError("Inducing set U is empty", field="U")
    return pts


def sor_matrix(X1: ArrayLike, X2: ArrayLike, U: ArrayLike, kernel: Kernel) -> np.ndarray:
    """Dense SoR covariance K_{X1,U} K_UU^{-1} K_{U,X2}."""
    pts = _check_inducing(kernel, U)
    L = _kuu_cholesky(kernel, pts)
    A = solve_lower(L, kernel.eval_matrix(pts, X1))
    B = solve_lower(L, kernel.eval_matrix(pts, X2))
    return A.T @ B


def fitc_matrix(X: ArrayLike, U: ArrayLike, kernel: Kernel) -> np.ndarray:
    """Dense FITC covariance on one input set: SoR with the exact diagonal."""
    Q = sor_matrix(X, X, U, kernel)
    np.fill_diagonal(Q, kernel.diag(X))
    return Q


def sor_cov(x: ArrayLike, z: ArrayLike, U: ArrayLike, kernel: Kernel) -> float:
    """SoR covariance k_xU K_UU^{-1} k_Uz between two points."""
    xv = np.atleast_1d(np.asarray(x, dtype=float)).reshape(1, -1)
    zv = np.atleast_1d(np.asarray(z, dtype=float)).reshape(1, -1)
    return float(sor_matrix(xv, zv, U, kernel)[0, 0])


def fitc_cov(x: ArrayLike, z: ArrayLike, U: ArrayLike, kernel: Kernel) -> float:
    """FITC covariance: SoR off the diagonal, exact k(x, x) when x == z."""
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    zv = np.atleast_1d(np.asarray(z, dtype=float))
    if xv.shape == zv.shape and np.array_equal(xv, zv):
        return kernel.eval(xv, zv)
    return sor_cov(xv, zv, U, kernel)


def global_gp_weights(X: ArrayLike, U: ArrayLike, kernel: Kernel) -> np.ndarray:
    """Dense "global GP interpolation" weights W = K_XU K_UU^{-1}.

    With the same jittered K_UU, W K_UU W^T reproduces the SoR covariance.
    """
    pts = _check_inducing(kernel, U)
    L = _kuu_cholesky(kernel, pts)
    return chol_solve(L, kernel.eval_matrix(pts, X)).T


class SoRGP(GpModel):
    """Subset of regressors on an inducing set U."""

    scheme = "sor"

    def __init__(
        self,
        kernel: Kernel,
        sigma2: float,
        mean: Optional[float] = 0.0,
        inducing: Optional[ArrayLike] = None,
    ):
        super().__init__(kernel, sigma2, mean)
        if inducing is None:
            raise ValidationError("Inducing points are required", field="inducing")
        self.inducing = _check_inducing(kernel, inducing)

    @property
    def m(self) -> int:
        return self.inducing.shape[0]

    def settings(self) -> Dict[str, Any]:
        return {"inducing": self.inducing}

    def _noise_diag(self, X: np.ndarray, V: np.ndarray) -> np.ndarray:
        return np.full(X.shape[0], self.sigma2)

    def _fit(self, X: np.ndarray, r: np.ndarray) -> None:
        self._Luu = _kuu_cholesky(self.kernel, self.inducing)
        V = solve_lower(self._Luu, self.kernel.eval_matrix(self.inducing, X))
        lam = self._noise_diag(X, V)
        A = np.eye(self.m) + (V / lam) @ V.T
        self._LA = stable_cholesky(A, scale=1.0)
        self._lam = lam
        self._r = r
        # A^{-1} V Lambda^{-1} r
        self._beta = chol_solve(self._LA, V @ (r / lam))
        self._V = V

    def _test_projection(self, Xs: np.ndarray) -> np.ndarray:
        return solve_lower(self._Luu, self.kernel.eval_matrix(self.inducing, Xs))

    def _predict_mean(self, Xs: np.ndarray) -> np.ndarray:
        return self._test_projection(Xs).T @ self._beta

    def _predict_variance(self, Xs: np.ndarray) -> np.ndarray:
        Vs = self._test_projection(Xs)
        W = solve_lower(self._LA, Vs)
        return np.sum(W * W, axis=0)

    def _log_marginal_likelihood(self) -> float:
        r, lam = self._r, self._lam
        c = solve_lower(self._LA, self._V @ (r / lam))
        quad = float(r @ (r / lam) - c @ c)
        logdet = chol_logdet(self._LA) + float(np.sum(np.log(lam)))
        return gaussian_lml(quad, logdet, r.shape[0])


class FITCGP(SoRGP):
    """Fully independent training conditional on an inducing set U."""

    scheme = "fitc"

    def _noise_diag(self, X: np.ndarray, V: np.ndarray) -> np.ndarray:
        correction = np.maximum(self.kernel.diag(X) - np.sum(V * V, axis=0), 0.0)
        return correction + self.sigma2

    def _predict_variance(self, Xs: np.ndarray) -> np.ndarray:
        Vs = self._test_projection(Xs)
        W = solve_lower(self._LA, Vs)
        return self.kernel.diag(Xs) - np.sum(Vs * Vs, axis=0) + np.sum(W * W, axis=0)
