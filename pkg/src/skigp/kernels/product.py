"""Product of one-dimensional kernels, one factor per input dimension."""

from typing import List, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from ..core.exceptions import ValidationError
from .base import Hypers, Kernel


class ProductKernel(Kernel):
    """k(x, z) = prod_d k_d(x_d, z_d).

    This is the form that yields a Kronecker-structured K_UU on a product grid.
    Hyperparameter names are prefixed with the dimension, e.g. ``d1.lengthscale``.
    """

    family = "product"

    def __init__(self, factors: Sequence[Kernel]):
        factors = list(factors)
        if not factors:
            raise ValidationError("Product kernel needs at least one factor", field="factors")
        for i, factor in enumerate(factors):
            if factor.input_dim != 1:
                raise ValidationError(
                    f"Product factor {i} has input_dim {factor.input_dim}; factors must be 1D",
                    field="factors",
                    value=factor.input_dim,
                )
        names: List[str] = []
        raw: List[float] = []
        mask: List[bool] = []
        for i, factor in enumerate(factors):
            names.extend(f"d{i}.{name}" for name in factor.hypers.names)
            raw.extend(factor.hypers.raw)
            mask.extend(factor.hypers.log_mask)
        super().__init__(Hypers(tuple(names), np.asarray(raw), tuple(mask)), len(factors))
        self._factors = factors

    def _matrix(self, X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
        out = self._factors[0]._matrix(X1[:, 0:1], X2[:, 0:1])
        for d in range(1, self.input_dim):
            out = out * self._factors[d]._matrix(X1[:, d : d + 1], X2[:, d : d + 1])
        return out

    def _matrix_gradients(self, X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
        parts = [f._matrix(X1[:, d : d + 1], X2[:, d : d + 1]) for d, f in enumerate(self._factors)]
        blocks = []
        for d, factor in enumerate(self._factors):
            others = np.ones((X1.shape[0], X2.shape[0]))
            for e, part in enumerate(parts):
                if e != d:
                    others = others * part
            blocks.append(factor._matrix_gradients(X1[:, d : d + 1], X2[:, d : d + 1]) * others)
        return np.concatenate(blocks, axis=0)

    def with_raw(self, raw: ArrayLike) -> "ProductKernel":
        raw = np.asarray(raw, dtype=float)
        if raw.shape != (len(self.hypers),):
            raise ValidationError(
                f"Expected {len(self.hypers)} raw hyperparameters, got {raw.shape}", field="raw"
            )
        new_factors = []
        start = 0
        for factor in self._factors:
            stop = start + len(factor.hypers)
            new_factors.append(factor.with_raw(raw[start:stop]))
            start = stop
        return ProductKernel(new_factors)

    @property
    def is_separable(self) -> bool:
        return True

    def factors(self) -> List[Kernel]:
        return list(self._factors)

    def factor_hyper_map(self) -> List[List[Optional[int]]]:
        out: List[List[Optional[int]]] = []
        start = 0
        for factor in self._factors:
            out.append(list(range(start, start + len(factor.hypers))))
            start += len(factor.hypers)
        return out
