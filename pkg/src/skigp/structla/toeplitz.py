"""
Symmetric Toeplitz K_UU with an O(m log m) matvec.

T_ij = c[|i - j|] is embedded in a circulant of size L, the first power of two
>= 2m - 1, whose first column is c followed by zeros and c[1:] reversed. The
product T v is the leading m entries of ifft(fft(circ) * fft(pad(v))).
"""

from typing import Optional

import numpy as np
import scipy.linalg
from loguru import logger
from numpy.typing import ArrayLike

from ..core.config import config
from ..core.exceptions import DimensionError, StructureError, ValidationError
from ..kernels.base import Kernel, toeplitz_column
from .base import EigenSystem, StructuredKuu, check_eig_size
from .fft import fft, ifft, next_pow2


class ToeplitzKuu(StructuredKuu):
    """Symmetric Toeplitz matrix stored by its first column."""

    form = "toeplitz"

    def __init__(self, column: ArrayLike):
        c = np.array(column, dtype=float).reshape(-1)
        if c.shape[0] == 0:
            raise DimensionError("Toeplitz column is empty", field="column")
        if not np.all(np.isfinite(c)):
            raise ValidationError("Toeplitz column contains non-finite values", field="column")
        c.flags.writeable = False
        super().__init__(c.shape[0])
        self._column = c

        m = c.shape[0]
        size = next_pow2(2 * m - 1)
        circ = np.zeros(size)
        circ[:m] = c
        if m > 1:
            circ[size - m + 1 :] = c[1:][::-1]
        spectrum = fft(circ)
        spectrum.flags.writeable = False
        self._size = size
        self._spectrum = spectrum

    @classmethod
    def from_kernel(cls, kernel: Kernel, axis: ArrayLike) -> "ToeplitzKuu":
        """K_UU of a 1D stationary kernel on an equispaced axis."""
        return cls(toeplitz_column(kernel, axis))

    @classmethod
    def from_dense(cls, matrix: ArrayLike, atol: Optional[float] = None) -> "ToeplitzKuu":
        """Recover the Toeplitz form of a dense matrix.

        Raises:
            StructureError: If the matrix is not symmetric Toeplitz
        """
        A = np.asarray(matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionError(f"Expected a square matrix, got {A.shape}", field="matrix")
        tol = config.structure.symmetry_rtol * max(float(np.abs(A).max()), 1.0)
        tol = tol if atol is None else atol
        column = A[:, 0]
        if np.abs(scipy.linalg.toeplitz(column) - A).max() > tol:
            raise StructureError("Matrix is not symmetric Toeplitz")
        return cls(column)

    @property
    def column(self) -> np.ndarray:
        return self._column

    @property
    def embedding_size(self) -> int:
        """Circulant size L."""
        return self._size

    def _matvec(self, v: np.ndarray) -> np.ndarray:
        padded = np.zeros((self._size,) + v.shape[1:])
        padded[: self.m] = v
        spectrum = self._spectrum.reshape((self._size,) + (1,) * (v.ndim - 1))
        out = ifft(spectrum * fft(padded))
        return np.real(out[: self.m])

    def _eigensystem(self) -> EigenSystem:
        check_eig_size(self.m)
        values, vectors = np.linalg.eigh(scipy.linalg.toeplitz(self._column))
        return EigenSystem.from_dense(values, vectors)

    def _dense(self) -> np.ndarray:
        return scipy.linalg.toeplitz(self._column)

    @property
    def trace(self) -> float:
        return float(self.m * self._column[0])

    def __repr__(self) -> str:
        return f"ToeplitzKuu(m={self.m}, embedding={self._size})"


def toeplitz_matvec(column: ArrayLike, v: ArrayLike) -> np.ndarray:
    """One-off symmetric Toeplitz product."""
    op = ToeplitzKuu(column)
    logger.debug(f"Toeplitz matvec with m={op.m}")
    return op.matvec(v)
