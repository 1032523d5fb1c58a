"""
Base classes for stationary covariance functions.

Hyperparameters live in log-space so that optimizers can move over
unconstrained values; the exp-transform is applied at evaluation time.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from ..core.config import config
from ..core.exceptions import DimensionError, StructureError, ValidationError
from ..core.validation import as_points, is_equispaced


@dataclass(frozen=True, eq=False)
class Hypers:
    """Named hyperparameter vector.

    Entries flagged in ``log_mask`` are stored as logarithms and are strictly
    positive after the exp-transform; the remaining entries (spectral mixture
    means) are stored as-is.
    """

    names: Tuple[str, ...]
    raw: np.ndarray
    log_mask: Tuple[bool, ...]

    def __post_init__(self):
        raw = np.array(self.raw, dtype=float).reshape(-1)
        if not (len(self.names) == raw.shape[0] == len(self.log_mask)):
            raise DimensionError(
                f"Hyperparameter arity mismatch: {len(self.names)} names, "
                f"{raw.shape[0]} values, {len(self.log_mask)} mask entries",
                field="raw",
                value=raw.shape[0],
            )
        if not np.all(np.isfinite(raw)):
            raise ValidationError("Hyperparameters must be finite", field="raw", value=raw)
        raw.flags.writeable = False
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "log_mask", tuple(bool(b) for b in self.log_mask))
        object.__setattr__(self, "raw", raw)

    @classmethod
    def from_values(
        cls, names: Sequence[str], values: Sequence[float], log_mask: Sequence[bool]
    ) -> "Hypers":
        """Build from natural (untransformed) values.

        Raises:
            ValidationError: If a log-space entry is not strictly positive
        """
        vals = np.asarray(values, dtype=float).reshape(-1)
        mask = np.asarray(log_mask, dtype=bool)
        if vals.shape != mask.shape:
            raise DimensionError("values and log_mask differ in length", field="values")
        for name, value, is_log in zip(names, vals, mask):
            if is_log and not value > 0:
                raise ValidationError(
                    f"Hyperparameter '{name}' must be positive, got {value}",
                    field=name,
                    value=value,
                )
        raw = np.where(mask, np.log(np.where(mask, vals, 1.0)), vals)
        return cls(tuple(names), raw, tuple(mask))

    @property
    def values(self) -> np.ndarray:
        """Natural values after the exp-transform."""
        mask = np.asarray(self.log_mask)
        return np.where(mask, np.exp(self.raw), self.raw)

    def value(self, name: str) -> float:
        """Natural value of one named hyperparameter."""
        try:
            idx = self.names.index(name)
        except ValueError:
            raise ValidationError(f"Unknown hyperparameter '{name}'", field="name", value=name)
        return float(self.values[idx])

    def with_raw(self, raw: ArrayLike) -> "Hypers":
        """Copy with a new raw (log-space) vector."""
        return Hypers(self.names, np.asarray(raw, dtype=float), self.log_mask)

    def to_pairs(self) -> List[Tuple[str, float]]:
        """Flat list of (name, natural value) pairs."""
        return [(name, float(v)) for name, v in zip(self.names, self.values)]

    def __len__(self) -> int:
        return len(self.names)


class Kernel(ABC):
    """Stationary covariance function k(x, z) = k(x - z).

    Kernels are immutable; ``with_raw`` returns a new instance.
    """

    family: str = ""

    def __init__(self, hypers: Hypers, input_dim: int):
        if input_dim < 1:
            raise ValidationError("input_dim must be positive", field="input_dim", value=input_dim)
        self._hypers = hypers
        self._input_dim = int(input_dim)

    @property
    def hypers(self) -> Hypers:
        """Hyperparameters of this kernel."""
        return self._hypers

    @property
    def input_dim(self) -> int:
        """Input dimension D."""
        return self._input_dim

    @abstractmethod
    def _matrix(self, X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
        """Covariance between validated (n1, D) and (n2, D) arrays."""

    @abstractmethod
    def with_raw(self, raw: ArrayLike) -> "Kernel":
        """Return a kernel of the same family with new raw hyperparameters."""

    def eval(self, x: ArrayLike, z: ArrayLike) -> float:
        """Covariance between two single points.

        Raises:
            DimensionError: If either point does not have ``input_dim`` entries
        """
        xv = np.atleast_1d(np.asarray(x, dtype=float))
        zv = np.atleast_1d(np.asarray(z, dtype=float))
        if xv.shape != (self.input_dim,) or zv.shape != (self.input_dim,):
            raise DimensionError(
                f"Points must have dimension {self.input_dim}, got {xv.shape} and {zv.shape}",
                field="x",
            )
        return float(self._matrix(xv[None, :], zv[None, :])[0, 0])

    def eval_matrix(self, X1: ArrayLike, X2: Optional[ArrayLike] = None) -> np.ndarray:
        """Dense covariance matrix with entries k(X1[i], X2[j]).

        Args:
            X1: (n1, D) points (1D arrays are read as D=1)
            X2: (n2, D) points; defaults to X1

        Returns:
            (n1, n2) matrix
        """
        A = as_points(X1, self.input_dim, name="X1")
        B = A if X2 is None else as_points(X2, self.input_dim, name="X2")
        return self._matrix(A, B)

    def diag(self, X: ArrayLike) -> np.ndarray:
        """Prior variances k(x, x) at each point."""
        A = as_points(X, self.input_dim, name="X")
        return np.full(A.shape[0], self.prior_variance)

    @property
    def prior_variance(self) -> float:
        """k(0), the variance at zero lag."""
        zero = np.zeros((1, self.input_dim))
        return float(self._matrix(zero, zero)[0, 0])

    def profile(self, tau: ArrayLike) -> np.ndarray:
        """k as a function of lag for a 1D kernel.

        Raises:
            StructureError: If the kernel is not one-dimensional
        """
        if self.input_dim != 1:
            raise StructureError(f"{self.family} kernel with D={self.input_dim} has no 1D profile")
        t = np.asarray(tau, dtype=float)
        return self._matrix(np.abs(t).reshape(-1, 1), np.zeros((1, 1))).reshape(t.shape)

    def gradient_matrices(self, X1: ArrayLike, X2: Optional[ArrayLike] = None) -> np.ndarray:
        """Derivatives of :meth:`eval_matrix` with respect to each raw hyperparameter.

        Returns:
            (p, n1, n2) array; slice i is dK / d raw[i]
        """
        A = as_points(X1, self.input_dim, name="X1")
        B = A if X2 is None else as_points(X2, self.input_dim, name="X2")
        return self._matrix_gradients(A, B)

    def _matrix_gradients(self, X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
        # central differences on the raw vector; families override with closed forms
        h = config.learning.fd_step
        raw = self.hypers.raw
        out = np.empty((raw.shape[0], X1.shape[0], X2.shape[0]))
        for i in range(raw.shape[0]):
            step = np.zeros_like(raw)
            step[i] = h
            upper = self.with_raw(raw + step)._matrix(X1, X2)
            lower = self.with_raw(raw - step)._matrix(X1, X2)
            out[i] = (upper - lower) / (2.0 * h)
        return out

    def profile_gradients(self, tau: ArrayLike) -> np.ndarray:
        """Derivatives of :meth:`profile` with respect to each raw hyperparameter.

        Returns:
            (p, len(tau)) array

        Raises:
            StructureError: If the kernel is not one-dimensional
        """
        if self.input_dim != 1:
            raise StructureError(f"{self.family} kernel with D={self.input_dim} has no 1D profile")
        t = np.abs(np.asarray(tau, dtype=float).reshape(-1, 1))
        return self._matrix_gradients(t, np.zeros((1, 1)))[:, :, 0]

    @property
    def is_separable(self) -> bool:
        """True if the kernel factorizes into per-dimension 1D kernels."""
        return self.input_dim == 1

    def factors(self) -> List["Kernel"]:
        """Per-dimension 1D kernels whose product equals this kernel.

        Raises:
            StructureError: If the kernel does not factorize across dimensions
        """
        if self.input_dim == 1:
            return [self]
        raise StructureError(f"{self.family} kernel does not factorize across dimensions")

    def factor_hyper_map(self) -> List[List[Optional[int]]]:
        """Where each factor's raw hyperparameters sit in this kernel's raw vector.

        Entry [d][j] is the index of raw hyperparameter j of ``factors()[d]``,
        or None when that factor hyperparameter is held fixed.
        """
        if self.input_dim == 1:
            return [list(range(len(self.hypers)))]
        raise StructureError(f"{self.family} kernel does not factorize across dimensions")

    def to_pairs(self) -> List[Tuple[str, float]]:
        """Hyperparameters as (name, natural value) pairs."""
        return self.hypers.to_pairs()

    def toeplitz_column(self, grid1d: ArrayLike, rtol: Optional[float] = None) -> np.ndarray:
        """First column of K_UU on an equispaced 1D grid.

        See :func:`toeplitz_column`.
        """
        return toeplitz_column(self, grid1d, rtol)

    def __repr__(self) -> str:
        params = ", ".join(f"{name}={value:.6g}" for name, value in self.to_pairs())
        return f"{self.__class__.__name__}(D={self.input_dim}, {params})"


def toeplitz_column(kernel: Kernel, grid1d: ArrayLike, rtol: Optional[float] = None) -> np.ndarray:
    """First column c of the symmetric Toeplitz K_UU, with c[t] = k(t * spacing).

    Args:
        kernel: One-dimensional stationary kernel
        grid1d: Sorted equispaced 1D points
        rtol: Equispacing tolerance (defaults to ``config.interp.equispaced_rtol``)

    Returns:
        Column of length len(grid1d) reproducing K_UU via T_ij = c[|i - j|]

    Raises:
        StructureError: If the kernel is not 1D or the grid is not equispaced
    """
    if kernel.input_dim != 1:
        raise StructureError("Toeplitz structure needs a one-dimensional kernel")
    axis = np.asarray(grid1d, dtype=float).reshape(-1)
    if axis.shape[0] == 0:
        raise StructureError("Toeplitz grid is empty")
    tol = config.interp.equispaced_rtol if rtol is None else rtol
    if not is_equispaced(axis, tol):
        raise StructureError("Grid is not equispaced; fall back to a dense K_UU")
    if axis.shape[0] == 1:
        return np.array([kernel.prior_variance])
    spacing = (axis[-1] - axis[0]) / (axis.shape[0] - 1)
    column = kernel.profile(np.arange(axis.shape[0]) * spacing)
    logger.debug(f"Toeplitz column of length {column.shape[0]} (spacing {spacing:.6g})")
    return column
