"""Exact GP regression with a dense Cholesky factorization."""

from typing import Any, Dict

import numpy as np

from .base import GpModel, gaussian_lml
from .linalg import chol_logdet, chol_solve, solve_lower, stable_cholesky


class ExactGP(GpModel):
    """Exact GP; O(n^3) fit, used as the reference engine."""

    scheme = "exact"
    has_lml_gradient = True

    def settings(self) -> Dict[str, Any]:
        return {}

    def _fit(self, X: np.ndarray, r: np.ndarray) -> None:
        K = self.kernel.eval_matrix(X) + self.sigma2 * np.eye(X.shape[0])
        self._L = stable_cholesky(K, scale=self.kernel.prior_variance)
        self._alpha = chol_solve(self._L, r)
        self._r = r

    def _predict_mean(self, Xs: np.ndarray) -> np.ndarray:
        return self.kernel.eval_matrix(Xs, self._X) @ self._alpha

    def _predict_variance(self, Xs: np.ndarray) -> np.ndarray:
        V = solve_lower(self._L, self.kernel.eval_matrix(self._X, Xs))
        return self.kernel.diag(Xs) - np.sum(V * V, axis=0)

    def _log_marginal_likelihood(self) -> float:
        return gaussian_lml(float(self._r @ self._alpha), chol_logdet(self._L), self._r.shape[0])

    def _lml_gradient(self) -> np.ndarray:
        # 1/2 tr((alpha alpha^T - (K + s2 I)^{-1}) dK) per hyperparameter
        inner = np.outer(self._alpha, self._alpha) - chol_solve(self._L, np.eye(self._r.shape[0]))
        kernel_part = 0.5 * np.einsum("ij,kij->k", inner, self.kernel.gradient_matrices(self._X))
        return np.append(kernel_part, 0.5 * self.sigma2 * np.trace(inner))
