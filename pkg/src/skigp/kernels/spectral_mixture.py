"""
Spectral mixture covariance for one input dimension.

    k(tau) = sum_q w_q exp(-2 pi^2 tau^2 v_q) cos(2 pi tau mu_q)

Weights w_q and spectral variances v_q are positive and stored in log-space;
spectral means mu_q are stored unconstrained (mu_q = 0 gives an RBF component).
Multidimensional spectral mixtures are formed as products over dimensions
with :class:`~skigp.kernels.product.ProductKernel`.
"""

from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from ..core.exceptions import DimensionError, ValidationError
from .base import Hypers, Kernel


class SpectralMixtureKernel(Kernel):
    """Q-component spectral mixture kernel on one input dimension."""

    family = "sm"

    def __init__(
        self,
        weights: Sequence[float] = (1.0,),
        means: Sequence[float] = (0.0,),
        variances: Sequence[float] = (1.0,),
        *,
        hypers: Optional[Hypers] = None,
    ):
        if hypers is None:
            w = list(weights)
            mu = list(means)
            v = list(variances)
            if not (len(w) == len(mu) == len(v)) or not w:
                raise DimensionError(
                    "weights, means and variances must be non-empty and equally long",
                    field="weights",
                )
            q = len(w)
            names = (
                [f"weight_{i}" for i in range(q)]
                + [f"mean_{i}" for i in range(q)]
                + [f"variance_{i}" for i in range(q)]
            )
            mask = [True] * q + [False] * q + [True] * q
            hypers = Hypers.from_values(names, w + mu + v, mask)
        if len(hypers) % 3 != 0 or len(hypers) == 0:
            raise DimensionError("Spectral mixture needs 3Q hyperparameters", field="hypers")
        super().__init__(hypers, 1)
        q = len(hypers) // 3
        values = hypers.values
        self._weights = values[:q].copy()
        self._means = values[q : 2 * q].copy()
        self._variances = values[2 * q :].copy()

    @classmethod
    def from_pairs(
        cls, pairs: Sequence[Tuple[str, float]], input_dim: int = 1
    ) -> "SpectralMixtureKernel":
        """Build from (name, natural value) pairs such as ``("weight_0", 1.0)``."""
        if input_dim != 1:
            raise ValidationError("Spectral mixture kernels are one-dimensional", field="input_dim")
        values = dict(pairs)
        q = sum(1 for name in values if name.startswith("weight_"))
        return cls(
            [values[f"weight_{i}"] for i in range(q)],
            [values[f"mean_{i}"] for i in range(q)],
            [values[f"variance_{i}"] for i in range(q)],
        )

    @property
    def num_components(self) -> int:
        """Number of mixture components Q."""
        return self._weights.shape[0]

    @property
    def weights(self) -> np.ndarray:
        return self._weights.copy()

    @property
    def means(self) -> np.ndarray:
        return self._means.copy()

    @property
    def variances(self) -> np.ndarray:
        return self._variances.copy()

    def _matrix(self, X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
        # |tau| keeps k(x, z) and k(z, x) on the same floating-point path
        tau = np.abs(X1[:, 0][:, None] - X2[:, 0][None, :])
        tau2 = tau * tau
        out = np.zeros_like(tau)
        for w, mu, v in zip(self._weights, self._means, self._variances):
            out += w * np.exp(-2.0 * np.pi**2 * tau2 * v) * np.cos(2.0 * np.pi * tau * mu)
        return out

    def _matrix_gradients(self, X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
        tau = np.abs(X1[:, 0][:, None] - X2[:, 0][None, :])
        tau2 = tau * tau
        q = self.num_components
        out = np.empty((3 * q,) + tau.shape)
        for i, (w, mu, v) in enumerate(zip(self._weights, self._means, self._variances)):
            envelope = w * np.exp(-2.0 * np.pi**2 * tau2 * v)
            phase = 2.0 * np.pi * tau * mu
            term = envelope * np.cos(phase)
            out[i] = term
            out[q + i] = -envelope * np.sin(phase) * 2.0 * np.pi * tau
            out[2 * q + i] = term * (-2.0 * np.pi**2 * tau2 * v)
        return out

    def with_raw(self, raw: ArrayLike) -> "SpectralMixtureKernel":
        return SpectralMixtureKernel(hypers=self.hypers.with_raw(raw))
