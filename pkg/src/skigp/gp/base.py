"""
Base class for GP regression engines.

Every engine shares the same lifecycle: construct with a kernel and noise
variance, ``fit`` on training data, then query predictions and the log
marginal likelihood. A fitted model is not modified by prediction calls.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from ..core.exceptions import NotFittedError, StructureError, ValidationError
from ..core.validation import as_points, as_vector, require_positive
from ..kernels.base import Kernel


class GpModel(ABC):
    """GP regression model with a constant mean.

    Args:
        kernel: Covariance function
        sigma2: Gaussian noise variance (> 0)
        mean: Constant prior mean, or None to use the empirical mean of y
    """

    scheme: str = ""
    # engines with a closed-form marginal-likelihood gradient set this
    has_lml_gradient: bool = False

    def __init__(self, kernel: Kernel, sigma2: float, mean: Optional[float] = 0.0):
        self.kernel = kernel
        self.sigma2 = require_positive(sigma2, "sigma2")
        self._mean_spec = mean
        self.mean = 0.0 if mean is None else float(mean)
        self.flags: List[str] = []
        self._X: Optional[np.ndarray] = None
        self._y: Optional[np.ndarray] = None

    # -- lifecycle --------------------------------------------------------

    def fit(self, X: ArrayLike, y: ArrayLike) -> "GpModel":
        """Condition on training data and precompute what prediction needs."""
        pts = as_points(X, self.kernel.input_dim)
        targets = as_vector(y, size=pts.shape[0], name="y")
        if not np.all(np.isfinite(targets)):
            raise ValidationError("y contains non-finite values", field="y")
        self._X = pts
        self._y = targets
        self.mean = float(targets.mean()) if self._mean_spec is None else float(self._mean_spec)
        self.flags = []
        self._fit(pts, targets - self.mean)
        logger.debug(f"Fitted {self.scheme} model on {pts.shape[0]} points")
        return self

    @property
    def is_fitted(self) -> bool:
        return self._X is not None

    @property
    def n(self) -> int:
        self._require_fitted()
        return self._X.shape[0]

    def _require_fitted(self) -> None:
        if self._X is None:
            raise NotFittedError(f"{self.__class__.__name__} must be fitted before use")

    def _flag(self, message: str) -> None:
        if message not in self.flags:
            self.flags.append(message)

    # -- engine hooks -----------------------------------------------------

    @abstractmethod
    def _fit(self, X: np.ndarray, r: np.ndarray) -> None:
        """Precompute on inputs X and centered targets r."""

    @abstractmethod
    def _predict_mean(self, Xs: np.ndarray) -> np.ndarray:
        """Posterior mean of f at Xs, excluding the constant mean."""

    @abstractmethod
    def _predict_variance(self, Xs: np.ndarray) -> np.ndarray:
        """Posterior variance of f at Xs (before clamping)."""

    @abstractmethod
    def _log_marginal_likelihood(self) -> float:
        """log p(y | hypers) for the centered targets."""

    @abstractmethod
    def settings(self) -> Dict[str, Any]:
        """Constructor arguments other than kernel and sigma2."""

    # -- public API -------------------------------------------------------

    def predict_mean(self, X_test: ArrayLike) -> np.ndarray:
        """Posterior predictive mean at test inputs."""
        self._require_fitted()
        Xs = as_points(X_test, self.kernel.input_dim, name="X_test")
        return self._predict_mean(Xs) + self.mean

    def predict_variance(self, X_test: ArrayLike) -> np.ndarray:
        """Posterior variance of the latent function at test inputs (clamped >= 0)."""
        self._require_fitted()
        Xs = as_points(X_test, self.kernel.input_dim, name="X_test")
        return np.maximum(self._predict_variance(Xs), 0.0)

    def log_marginal_likelihood(self) -> float:
        """log p(y) = -1/2 [r^T (K + s2 I)^{-1} r + log|K + s2 I| + n log 2 pi]."""
        self._require_fitted()
        return self._log_marginal_likelihood()

    def log_marginal_likelihood_gradient(self) -> np.ndarray:
        """d log p(y) / d :meth:`raw_hypers`, kernel entries first and log sigma2 last.

        Raises:
            StructureError: If the engine has no closed-form gradient
        """
        self._require_fitted()
        if not self.has_lml_gradient:
            raise StructureError(
                f"{self.scheme} model has no closed-form marginal-likelihood gradient"
            )
        return self._lml_gradient()

    def _lml_gradient(self) -> np.ndarray:
        raise NotImplementedError

    def clone(self, kernel: Optional[Kernel] = None, sigma2: Optional[float] = None, **overrides):
        """Unfitted copy with optionally replaced hyperparameters or settings."""
        params = self.settings()
        params.update(overrides)
        return self.__class__(
            kernel if kernel is not None else self.kernel,
            self.sigma2 if sigma2 is None else sigma2,
            mean=self._mean_spec,
            **params,
        )

    def learning_overrides(self) -> Dict[str, Any]:
        """Setting overrides applied to models built during hyperparameter learning."""
        return {}

    @property
    def mean_spec(self) -> Optional[float]:
        """Constructor mean argument (None for the empirical mean)."""
        return self._mean_spec

    def raw_hypers(self) -> np.ndarray:
        """[kernel raw hypers..., log sigma2]."""
        return np.append(self.kernel.hypers.raw, np.log(self.sigma2))

    def with_raw_hypers(self, raw: ArrayLike, **overrides) -> "GpModel":
        """Unfitted clone at a raw hyperparameter vector from :meth:`raw_hypers`."""
        vec = np.asarray(raw, dtype=float)
        return self.clone(self.kernel.with_raw(vec[:-1]), float(np.exp(vec[-1])), **overrides)

    def __repr__(self) -> str:
        state = "fitted" if self.is_fitted else "unfitted"
        return f"{self.__class__.__name__}({self.kernel!r}, sigma2={self.sigma2:.4g}, {state})"


def gaussian_lml(quad: float, logdet: float, n: int) -> float:
    """-1/2 (quad + logdet + n log 2 pi)."""
    return float(-0.5 * (quad + logdet + n * np.log(2.0 * np.pi)))
