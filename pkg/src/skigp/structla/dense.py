"""Dense symmetric K_UU, used for irregular grids and as a test oracle."""

from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from ..core.config import config
from ..core.exceptions import DimensionError, StructureError
from .base import EigenSystem, StructuredKuu, check_eig_size


class DenseKuu(StructuredKuu):
    """Explicit symmetric m x m matrix."""

    form = "dense"

    def __init__(self, matrix: ArrayLike, rtol: Optional[float] = None):
        A = np.array(matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
            raise DimensionError(f"Expected a nonempty square matrix, got {A.shape}", field="matrix")
        tol = config.structure.symmetry_rtol if rtol is None else rtol
        scale = max(float(np.abs(A).max()), 1.0)
        asym = float(np.abs(A - A.T).max())
        if asym > tol * scale:
            raise StructureError(f"Matrix is not symmetric (max |A - A^T| = {asym:.3g})")
        A.flags.writeable = False
        super().__init__(A.shape[0])
        self._A = A

    @property
    def matrix(self) -> np.ndarray:
        return self._A

    def _matvec(self, v: np.ndarray) -> np.ndarray:
        return self._A @ v

    def _eigensystem(self) -> EigenSystem:
        check_eig_size(self.m)
        values, vectors = np.linalg.eigh(self._A)
        return EigenSystem.from_dense(values, vectors)

    def _dense(self) -> np.ndarray:
        return np.array(self._A)

    @property
    def trace(self) -> float:
        return float(np.trace(self._A))
