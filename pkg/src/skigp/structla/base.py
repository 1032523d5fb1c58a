"""
Base class for structured K_UU operators and their eigensystems.
"""

from abc import ABC, abstractmethod
from typing import Callable, Optional

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from ..core.config import config
from ..core.exceptions import DimensionError, SizeLimitError, StructureError

Apply = Callable[[np.ndarray], np.ndarray]


class EigenSystem:
    """Eigendecomposition A = Q diag(eigenvalues) Q^T.

    Eigenvalues are sorted nonincreasing. Q is only reachable through
    ``multiply_q`` and ``multiply_qt`` so that Kronecker systems never
    materialize it. Systems from a dense eigensolver also keep Q for
    eigenvalue derivatives.
    """

    def __init__(
        self,
        eigenvalues: np.ndarray,
        multiply_q: Apply,
        multiply_qt: Apply,
        vectors: Optional[np.ndarray] = None,
    ):
        vals = np.array(eigenvalues, dtype=float).reshape(-1)
        vals.flags.writeable = False
        self._eigenvalues = vals
        self._multiply_q = multiply_q
        self._multiply_qt = multiply_qt
        self._vectors = vectors

    @classmethod
    def from_dense(cls, values: np.ndarray, vectors: np.ndarray) -> "EigenSystem":
        """Wrap the output of a dense symmetric eigensolver (any order)."""
        order = np.argsort(-values, kind="stable")
        Q = np.array(vectors[:, order])
        Q.flags.writeable = False
        return cls(values[order], lambda v: Q @ v, lambda v: Q.T @ v, vectors=Q)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eigenvalues

    @property
    def m(self) -> int:
        return self._eigenvalues.shape[0]

    @property
    def clamped_count(self) -> int:
        """Number of negative eigenvalues raised to zero by ``clamped``."""
        return int(np.count_nonzero(self._eigenvalues < 0))

    def clamped(self) -> np.ndarray:
        """Eigenvalues with round-off negatives replaced by 0."""
        count = self.clamped_count
        if count:
            worst = float(-self._eigenvalues.min())
            scale = float(np.abs(self._eigenvalues).max())
            message = f"Clamped {count} negative eigenvalues (most negative -{worst:.3g})"
            if worst > 1e-8 * scale:
                logger.warning(message)
            else:
                logger.debug(message)
        return np.maximum(self._eigenvalues, 0.0)

    def eigenvalue_derivative(self, dA: ArrayLike) -> np.ndarray:
        """First-order change diag(Q^T dA Q) of each eigenvalue under a symmetric dA.

        Raises:
            StructureError: If the eigenvectors are not held densely
            DimensionError: If dA is not m x m
        """
        if self._vectors is None:
            raise StructureError("Eigenvalue derivatives need densely held eigenvectors")
        D = np.asarray(dA, dtype=float)
        if D.shape != (self.m, self.m):
            raise DimensionError(
                f"Perturbation of shape {D.shape} does not match {self.m} eigenvalues", field="dA"
            )
        Q = self._vectors
        return np.einsum("ij,ij->j", Q, D @ Q)

    def multiply_q(self, v: ArrayLike) -> np.ndarray:
        """Q v."""
        return self._multiply_q(np.asarray(v, dtype=float))

    def multiply_qt(self, v: ArrayLike) -> np.ndarray:
        """Q^T v."""
        return self._multiply_qt(np.asarray(v, dtype=float))


class StructuredKuu(ABC):
    """Symmetric m x m inducing-point covariance with a fast matvec.

    Operators are immutable after construction; ``matvec`` is re-entrant.
    """

    form: str = ""

    def __init__(self, m: int):
        self._m = int(m)
        self._eig: Optional[EigenSystem] = None

    @property
    def m(self) -> int:
        """Matrix size."""
        return self._m

    @property
    def shape(self):
        return (self._m, self._m)

    @abstractmethod
    def _matvec(self, v: np.ndarray) -> np.ndarray:
        """Product with a validated (m,) or (m, k) array."""

    @abstractmethod
    def _eigensystem(self) -> EigenSystem:
        """Compute the eigensystem."""

    @abstractmethod
    def _dense(self) -> np.ndarray:
        """Dense expansion (size already checked)."""

    @property
    @abstractmethod
    def trace(self) -> float:
        """Sum of the diagonal."""

    def matvec(self, v: ArrayLike) -> np.ndarray:
        """A v for a vector of length m or an (m, k) block.

        Raises:
            DimensionError: If v does not have m rows
        """
        arr = np.asarray(v, dtype=float)
        if arr.ndim not in (1, 2) or arr.shape[0] != self._m:
            raise DimensionError(
                f"{self.form} operator of size {self._m} cannot multiply shape {arr.shape}",
                field="v",
                value=arr.shape,
            )
        return self._matvec(arr)

    def __matmul__(self, v: ArrayLike) -> np.ndarray:
        return self.matvec(v)

    def eig(self) -> EigenSystem:
        """Eigensystem, computed once and cached."""
        if self._eig is None:
            self._eig = self._eigensystem()
            logger.debug(f"Eigendecomposition of {self!r} done")
        return self._eig

    def to_dense(self, cap: Optional[int] = None) -> np.ndarray:
        """Dense m x m expansion for tests and oracles.

        Raises:
            SizeLimitError: If m exceeds the cap (``config.structure.dense_cap``)
        """
        limit = config.structure.dense_cap if cap is None else int(cap)
        if self._m > limit:
            raise SizeLimitError(
                f"Refusing to expand a {self._m} x {self._m} operator (cap {limit})",
                field="m",
                value=self._m,
            )
        return self._dense()

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(m={self._m})"


def check_eig_size(m: int) -> None:
    """Guard for the dense symmetric eigensolver."""
    cap = config.structure.eig_cap
    if m > cap:
        raise SizeLimitError(
            f"Dense eigensolver limited to {cap} points per axis, got {m}", field="m", value=m
        )
