"""
Kronecker-product K_UU = K_1 (x) K_2 (x) ... (x) K_P.

Products use the mode-multiply identity: the vector is viewed as a tensor of
shape (m_1, ..., m_P) and each factor is applied along its own axis, left to
right. Nothing of size m x m is ever formed.
"""

from functools import reduce
from typing import Callable, List, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike

from ..core.exceptions import DimensionError, ValidationError
from .base import EigenSystem, StructuredKuu

Factor = Union[np.ndarray, StructuredKuu, Callable[[np.ndarray], np.ndarray]]


def _factor_size(factor: Factor, fallback: int) -> int:
    if isinstance(factor, StructuredKuu):
        return factor.m
    if isinstance(factor, np.ndarray):
        return factor.shape[1]
    return fallback


def _apply_factor(factor: Factor, block: np.ndarray) -> np.ndarray:
    if isinstance(factor, StructuredKuu):
        return factor.matvec(block)
    if isinstance(factor, np.ndarray):
        return factor @ block
    return factor(block)


def kron_matvec(
    factors: Sequence[Factor], v: ArrayLike, sizes: Optional[Sequence[int]] = None
) -> np.ndarray:
    """(A_1 (x) ... (x) A_P) v without forming the Kronecker product.

    Args:
        factors: Square matrices, structured operators, or callables acting on
            (m_d, k) blocks
        v: Vector of length prod(m_d), or a (prod(m_d), k) block
        sizes: Factor sizes, required when factors are plain callables

    Returns:
        Product with the same shape as v
    """
    arr = np.asarray(v, dtype=float)
    dims = [
        _factor_size(f, sizes[d] if sizes is not None else -1) for d, f in enumerate(factors)
    ]
    if any(d < 1 for d in dims):
        raise ValidationError("Factor sizes are required for callable factors", field="sizes")
    total = int(np.prod(dims))
    if arr.shape[0] != total:
        raise DimensionError(
            f"Kronecker product of size {total} cannot multiply shape {arr.shape}",
            field="v",
            value=arr.shape,
        )
    batch = arr.shape[1:]
    tensor = arr.reshape(tuple(dims) + batch)
    for d, factor in enumerate(factors):
        moved = np.moveaxis(tensor, d, 0)
        lead = moved.shape
        result = _apply_factor(factor, moved.reshape(dims[d], -1))
        tensor = np.moveaxis(result.reshape(lead), 0, d)
    return tensor.reshape(arr.shape)


class KroneckerKuu(StructuredKuu):
    """Kronecker product of per-axis structured factors."""

    form = "kronecker"

    def __init__(self, factors: Sequence[StructuredKuu]):
        factors = list(factors)
        if not factors:
            raise ValidationError("Kronecker product needs at least one factor", field="factors")
        for f in factors:
            if not isinstance(f, StructuredKuu):
                raise ValidationError(
                    f"Kronecker factors must be structured operators, got {type(f).__name__}",
                    field="factors",
                )
        self._factors: List[StructuredKuu] = factors
        self._order: Optional[np.ndarray] = None
        super().__init__(int(np.prod([f.m for f in factors])))

    @property
    def factors(self) -> List[StructuredKuu]:
        return list(self._factors)

    @property
    def sizes(self) -> List[int]:
        return [f.m for f in self._factors]

    def _matvec(self, v: np.ndarray) -> np.ndarray:
        return kron_matvec(self._factors, v)

    def _eigensystem(self) -> EigenSystem:
        systems = [f.eig() for f in self._factors]
        sizes = self.sizes
        values = reduce(np.kron, [s.eigenvalues for s in systems])
        order = np.argsort(-values, kind="stable")
        self._order = order
        q_ops = [s.multiply_q for s in systems]
        qt_ops = [s.multiply_qt for s in systems]

        def multiply_q(v: np.ndarray) -> np.ndarray:
            scattered = np.zeros_like(v)
            scattered[order] = v
            return kron_matvec(q_ops, scattered, sizes)

        def multiply_qt(v: np.ndarray) -> np.ndarray:
            return kron_matvec(qt_ops, v, sizes)[order]

        return EigenSystem(values[order], multiply_q, multiply_qt)

    def eigenvalue_derivative(self, axis: int, factor_derivative: ArrayLike) -> np.ndarray:
        """Change of the sorted eigenvalues when only factor ``axis`` varies.

        Args:
            axis: Index of the varying factor
            factor_derivative: Derivatives of that factor's sorted eigenvalues

        Returns:
            Derivatives aligned with ``eig().eigenvalues``
        """
        self.eig()
        parts = [f.eig().eigenvalues for f in self._factors]
        delta = np.asarray(factor_derivative, dtype=float).reshape(-1)
        if delta.shape != parts[axis].shape:
            raise DimensionError(
                f"Factor {axis} has {parts[axis].shape[0]} eigenvalues, got {delta.shape[0]}",
                field="factor_derivative",
            )
        parts[axis] = delta
        return reduce(np.kron, parts)[self._order]

    def _dense(self) -> np.ndarray:
        return reduce(np.kron, [f.to_dense() for f in self._factors])

    @property
    def trace(self) -> float:
        return float(np.prod([f.trace for f in self._factors]))

    def __repr__(self) -> str:
        inner = ", ".join(repr(f) for f in self._factors)
        return f"KroneckerKuu([{inner}])"
