"""Squared-exponential (RBF) covariance."""

from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from .base import Hypers, Kernel


class RBFKernel(Kernel):
    """Isotropic RBF kernel k(x, z) = s^2 exp(-0.5 ||x - z||^2 / l^2).

    The signal variance s^2 defaults to 1, which gives the unscaled form.
    """

    family = "rbf"
    HYPER_NAMES = ("lengthscale", "signal_variance")

    def __init__(
        self,
        lengthscale: float = 1.0,
        signal_variance: float = 1.0,
        input_dim: int = 1,
        *,
        hypers: Optional[Hypers] = None,
    ):
        if hypers is None:
            hypers = Hypers.from_values(
                self.HYPER_NAMES, [lengthscale, signal_variance], (True, True)
            )
        super().__init__(hypers, input_dim)
        self._lengthscale, self._signal_variance = (float(v) for v in hypers.values)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[str, float]], input_dim: int = 1) -> "RBFKernel":
        """Build from (name, natural value) pairs."""
        values = dict(pairs)
        return cls(values["lengthscale"], values.get("signal_variance", 1.0), input_dim)

    @property
    def lengthscale(self) -> float:
        return self._lengthscale

    @property
    def signal_variance(self) -> float:
        return self._signal_variance

    def _squared_distances(self, X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
        sq = np.zeros((X1.shape[0], X2.shape[0]))
        for d in range(self.input_dim):
            diff = X1[:, d][:, None] - X2[:, d][None, :]
            sq += diff * diff
        return sq

    def _matrix(self, X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
        sq = self._squared_distances(X1, X2)
        return self._signal_variance * np.exp(-0.5 * sq / self._lengthscale**2)

    def _matrix_gradients(self, X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
        scaled = self._squared_distances(X1, X2) / self._lengthscale**2
        K = self._signal_variance * np.exp(-0.5 * scaled)
        return np.stack([K * scaled, K])

    def with_raw(self, raw: ArrayLike) -> "RBFKernel":
        return RBFKernel(input_dim=self.input_dim, hypers=self.hypers.with_raw(raw))

    @property
    def is_separable(self) -> bool:
        return True

    def factors(self) -> List[Kernel]:
        """One 1D RBF per dimension; the signal variance rides on the first."""
        if self.input_dim == 1:
            return [self]
        return [RBFKernel(self._lengthscale, self._signal_variance)] + [
            RBFKernel(self._lengthscale, 1.0) for _ in range(self.input_dim - 1)
        ]

    def factor_hyper_map(self) -> List[List[Optional[int]]]:
        # the lengthscale is shared; only the first factor carries the signal variance
        return [[0, 1]] + [[0, None] for _ in range(self.input_dim - 1)]
