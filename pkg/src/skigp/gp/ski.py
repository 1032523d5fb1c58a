"""
Structured kernel interpolation (SKI / KISS-GP).

K_XX is approximated by K_SKI = W K_UU W^T with a sparse local interpolation
matrix W and a structured (Toeplitz or Kronecker) K_UU on a product grid.
Training solves (K_SKI + sigma2 I) alpha = y by conjugate gradients using only
fast matvecs.
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from ..core.config import config
from ..core.exceptions import DimensionError, SizeLimitError, StructureError, ValidationError
from ..interp.grid import ProductGrid
from ..interp.sparse import InterpScheme, SparseWeights, build_W
from ..kernels.base import Kernel
from ..solver.cg import CgConfig, cg_solve
from ..solver.logdet import logdet_exact, logdet_scaled
from ..structla import DenseKuu, KroneckerKuu, StructuredKuu, ToeplitzKuu, kron_matvec
from .base import GpModel, gaussian_lml


class KuuStructure(str, Enum):
    AUTO = "auto"
    DENSE = "dense"
    TOEPLITZ = "toeplitz"
    KRONECKER = "kronecker"


class CrossCovariance(str, Enum):
    """How test-time cross covariances K_{X*,X} are formed."""

    # W* K_UU W^T
    INTERPOLATED = "interpolated"
    # W* K_{U,X}, with K_{U,X} evaluated exactly
    EXACT = "exact"


class LogdetMethod(str, Enum):
    AUTO = "auto"
    EXACT = "exact"
    SCALED = "scaled"


def _axis_kuu(kernel: Kernel, axis: np.ndarray, equispaced: bool) -> StructuredKuu:
    if equispaced:
        return ToeplitzKuu.from_kernel(kernel, axis)
    return DenseKuu(kernel.eval_matrix(axis))


def build_kuu(
    kernel: Kernel, grid: ProductGrid, structure: Union[KuuStructure, str] = KuuStructure.AUTO
) -> StructuredKuu:
    """K_UU on a product grid in the requested structure.

    ``auto`` picks Toeplitz for an equispaced 1D grid, a Kronecker product of
    per-axis Toeplitz/dense factors for a separable kernel in D > 1, and a dense
    matrix otherwise.

    Raises:
        DimensionError: If kernel and grid dimensions differ
        StructureError: If the requested structure does not apply
    """
    structure = KuuStructure(structure)
    if kernel.input_dim != grid.input_dim:
        raise DimensionError(
            f"Kernel dimension {kernel.input_dim} does not match grid dimension {grid.input_dim}",
            field="grid",
        )
    if structure is KuuStructure.AUTO:
        if grid.input_dim == 1:
            structure = KuuStructure.TOEPLITZ if grid.equispaced_flags[0] else KuuStructure.DENSE
        elif kernel.is_separable:
            structure = KuuStructure.KRONECKER
        else:
            structure = KuuStructure.DENSE

    if structure is KuuStructure.DENSE:
        return DenseKuu(kernel.eval_matrix(grid.points()))
    if structure is KuuStructure.TOEPLITZ:
        if grid.input_dim != 1:
            raise StructureError("Toeplitz K_UU needs a one-dimensional grid; use kronecker")
        return ToeplitzKuu.from_kernel(kernel, grid.axes[0])

    factors = kernel.factors()
    parts = [
        _axis_kuu(f, axis, flag) for f, axis, flag in zip(factors, grid.axes, grid.equispaced_flags)
    ]
    if len(parts) == 1:
        return parts[0]
    return KroneckerKuu(parts)


def _kuu_derivatives(
    kernel: Kernel, points: np.ndarray, part: StructuredKuu
) -> List[StructuredKuu]:
    """dK / d raw hyperparameter on ``points``, in the structure of ``part``."""
    if isinstance(part, ToeplitzKuu):
        axis = points[:, 0]
        return [ToeplitzKuu(c) for c in kernel.profile_gradients(np.abs(axis - axis[0]))]
    return [DenseKuu(M) for M in kernel.gradient_matrices(points)]


class KuuGradient:
    """Derivatives of K_UU with respect to each kernel raw hyperparameter.

    Derivatives keep the structure of K_UU. For a Kronecker K_UU, each one is
    a sum of Kronecker terms with a single differentiated factor.
    """

    def __init__(self, kernel: Kernel, grid: ProductGrid, Kuu: StructuredKuu):
        self.Kuu = Kuu
        self._terms: List[List[Tuple[Optional[int], StructuredKuu]]] = [
            [] for _ in range(len(kernel.hypers))
        ]
        if isinstance(Kuu, KroneckerKuu):
            hyper_map = kernel.factor_hyper_map()
            for d, (factor, part) in enumerate(zip(kernel.factors(), Kuu.factors)):
                derivatives = _kuu_derivatives(factor, grid.axes[d][:, None], part)
                for j, derivative in enumerate(derivatives):
                    index = hyper_map[d][j]
                    if index is not None:
                        self._terms[index].append((d, derivative))
        else:
            for i, derivative in enumerate(_kuu_derivatives(kernel, grid.points(), Kuu)):
                self._terms[i].append((None, derivative))

    def __len__(self) -> int:
        return len(self._terms)

    def matvec(self, i: int, v: ArrayLike) -> np.ndarray:
        """(dK_UU / d raw[i]) v."""
        arr = np.asarray(v, dtype=float)
        out = np.zeros_like(arr)
        for axis, part in self._terms[i]:
            if axis is None:
                out += part.matvec(arr)
            else:
                factors = self.Kuu.factors
                factors[axis] = part
                out += kron_matvec(factors, arr)
        return out

    def eigenvalues(self, i: int) -> np.ndarray:
        """d lambda / d raw[i], aligned with ``Kuu.eig().eigenvalues``."""
        eig = self.Kuu.eig()
        out = np.zeros(eig.m)
        for axis, part in self._terms[i]:
            dense = part.to_dense(cap=part.m)
            if axis is None:
                out += eig.eigenvalue_derivative(dense)
            else:
                factor = self.Kuu.factors[axis].eig().eigenvalue_derivative(dense)
                out += self.Kuu.eigenvalue_derivative(axis, factor)
        return out


class SkiOperator:
    """Matrix-free K_SKI + sigma2 I = W K_UU W^T + sigma2 I."""

    def __init__(self, W: SparseWeights, Kuu: StructuredKuu, sigma2: float):
        if W.n_cols != Kuu.m:
            raise DimensionError(
                f"W has {W.n_cols} columns but K_UU has size {Kuu.m}", field="Kuu"
            )
        self.W = W
        self.Kuu = Kuu
        self.sigma2 = float(sigma2)

    @property
    def n(self) -> int:
        return self.W.n_rows

    def kski_apply(self, v: ArrayLike) -> np.ndarray:
        """W K_UU W^T v (no noise term)."""
        return self.W.spmv(self.Kuu.matvec(self.W.spmv_t(v)))

    def apply(self, v: ArrayLike) -> np.ndarray:
        """(W K_UU W^T + sigma2 I) v."""
        arr = np.asarray(v, dtype=float)
        if arr.shape[0] != self.n:
            raise DimensionError(
                f"SKI operator of size {self.n} cannot multiply shape {arr.shape}", field="v"
            )
        return self.kski_apply(arr) + self.sigma2 * arr

    __call__ = apply

    def kski_dense(self, cap: Optional[int] = None) -> np.ndarray:
        """Dense W K_UU W^T for oracles and exact log-determinants."""
        limit = config.structure.dense_cap if cap is None else int(cap)
        if self.n > limit:
            raise SizeLimitError(
                f"Refusing to expand a {self.n} x {self.n} SKI covariance (cap {limit})",
                field="n",
                value=self.n,
            )
        WT = self.W.matrix.T.toarray()
        return self.W.matrix @ self.Kuu.matvec(WT)

    def to_dense(self, cap: Optional[int] = None) -> np.ndarray:
        return self.kski_dense(cap) + self.sigma2 * np.eye(self.n)


def ski_apply(op: SkiOperator, v: ArrayLike) -> np.ndarray:
    """Functional form of :meth:`SkiOperator.apply`."""
    return op.apply(v)


class SkiGP(GpModel):
    """SKI / KISS-GP regression on a product grid.

    Args:
        kernel: Stationary kernel
        sigma2: Noise variance
        mean: Constant mean (None for the empirical mean)
        grid: Inducing grid covering training and test inputs
        interp: Interpolation scheme for W
        structure: K_UU structure
        cg: CG settings for training and variance solves
        cross_cov: Test-time cross-covariance mode
        logdet: Log-determinant method for the marginal likelihood
    """

    scheme = "ski"
    has_lml_gradient = True

    def __init__(
        self,
        kernel: Kernel,
        sigma2: float,
        mean: Optional[float] = 0.0,
        grid: Optional[ProductGrid] = None,
        interp: Union[InterpScheme, str] = InterpScheme.CUBIC,
        structure: Union[KuuStructure, str] = KuuStructure.AUTO,
        cg: Optional[CgConfig] = None,
        cross_cov: Union[CrossCovariance, str] = CrossCovariance.INTERPOLATED,
        logdet: Union[LogdetMethod, str] = LogdetMethod.AUTO,
        idw_power: Optional[float] = None,
    ):
        super().__init__(kernel, sigma2, mean)
        if grid is None:
            raise ValidationError("SKI needs an inducing grid", field="grid")
        if grid.input_dim != kernel.input_dim:
            raise DimensionError(
                f"Grid dimension {grid.input_dim} does not match kernel dimension "
                f"{kernel.input_dim}",
                field="grid",
            )
        self.grid = grid
        self.interp = InterpScheme(interp)
        self.structure = KuuStructure(structure)
        self.cg = cg or CgConfig()
        self.cross_cov = CrossCovariance(cross_cov)
        self.logdet = LogdetMethod(logdet)
        self.idw_power = idw_power
        self.Kuu = build_kuu(kernel, grid, self.structure)

    @property
    def m(self) -> int:
        return self.grid.m

    def settings(self) -> Dict[str, Any]:
        return {
            "grid": self.grid,
            "interp": self.interp,
            "structure": self.structure,
            "cg": self.cg,
            "cross_cov": self.cross_cov,
            "logdet": self.logdet,
            "idw_power": self.idw_power,
        }

    def learning_overrides(self) -> Dict[str, Any]:
        return {"cg": CgConfig(tol=config.solver.learning_cg_tol, max_iters=self.cg.max_iters)}

    def interpolation(self, X: ArrayLike) -> SparseWeights:
        """W for arbitrary inputs on this model's grid."""
        return build_W(X, self.grid, self.interp, self.idw_power)

    def _fit(self, X: np.ndarray, r: np.ndarray) -> None:
        self.W = self.interpolation(X)
        self.operator = SkiOperator(self.W, self.Kuu, self.sigma2)
        report = cg_solve(self.operator.apply, r, self.cg)
        if not report.converged:
            self._flag(f"CG did not converge (residual {report.residual:.2e})")
        self.solve_report = report
        self._alpha = report.solution
        self._r = r
        # K_UU W^T alpha, shared by every mean prediction
        self._u_alpha = self.Kuu.matvec(self.W.spmv_t(self._alpha))

    def _cross_columns(self, Ws: SparseWeights) -> np.ndarray:
        """K_{X,X*} as an (n, n*) block."""
        if self.cross_cov is CrossCovariance.INTERPOLATED:
            return self.W.spmv(self.Kuu.matvec(Ws.matrix.T.toarray()))
        K_ux = self._kux_blocks()
        return (Ws.matrix @ K_ux).T

    def _kux_blocks(self, block: int = 2048) -> np.ndarray:
        """Exact K_{U,X}, evaluated in column blocks."""
        U = self.grid.points()
        out = np.empty((U.shape[0], self._X.shape[0]))
        for start in range(0, self._X.shape[0], block):
            stop = min(start + block, self._X.shape[0])
            out[:, start:stop] = self.kernel.eval_matrix(U, self._X[start:stop])
        return out

    def _predict_mean(self, Xs: np.ndarray) -> np.ndarray:
        Ws = self.interpolation(Xs)
        if self.cross_cov is CrossCovariance.INTERPOLATED:
            return Ws.spmv(self._u_alpha)
        return Ws.spmv(self._kux_blocks() @ self._alpha)

    def _predict_variance(self, Xs: np.ndarray) -> np.ndarray:
        Ws = self.interpolation(Xs)
        cross = self._cross_columns(Ws)
        prior = self.kernel.diag(Xs)
        out = np.empty(Xs.shape[0])
        failures = 0
        for i in range(Xs.shape[0]):
            report = cg_solve(self.operator.apply, cross[:, i], self.cg)
            if not report.converged:
                failures += 1
            out[i] = prior[i] - cross[:, i] @ report.solution
        if failures:
            self._flag(f"CG did not converge for {failures} variance solves")
            logger.warning(f"{failures} of {Xs.shape[0]} variance solves did not converge")
        return out

    def _logdet_method(self) -> LogdetMethod:
        if self.logdet is not LogdetMethod.AUTO:
            return self.logdet
        exact = self.n <= config.solver.exact_logdet_max_n
        return LogdetMethod.EXACT if exact else LogdetMethod.SCALED

    def logdet_value(self) -> float:
        """log|K_SKI + sigma2 I| by the configured method."""
        self._require_fitted()
        if self._logdet_method() is LogdetMethod.EXACT:
            eigs = np.linalg.eigvalsh(self.operator.kski_dense(cap=max(self.n, 1)))
            return logdet_exact(eigs, self.sigma2)
        return logdet_scaled(self.Kuu.eig().clamped(), self.n, self.sigma2)

    def _log_marginal_likelihood(self) -> float:
        return gaussian_lml(float(self._r @ self._alpha), self.logdet_value(), self.n)

    def _lml_gradient(self) -> np.ndarray:
        grads = KuuGradient(self.kernel, self.grid, self.Kuu)
        # data fit: 1/2 alpha^T W dK_UU W^T alpha
        b = self.W.spmv_t(self._alpha)
        fit = np.array([0.5 * b @ grads.matvec(i, b) for i in range(len(grads))])
        fit_noise = 0.5 * self.sigma2 * float(self._alpha @ self._alpha)
        if self._logdet_method() is LogdetMethod.EXACT:
            dlogdet, dlogdet_noise = self._exact_logdet_gradient(grads)
        else:
            dlogdet, dlogdet_noise = self._scaled_logdet_gradient(grads)
        return np.append(fit - 0.5 * dlogdet, fit_noise - 0.5 * dlogdet_noise)

    def _exact_logdet_gradient(self, grads: KuuGradient) -> Tuple[np.ndarray, float]:
        values, vectors = np.linalg.eigh(self.operator.kski_dense(cap=max(self.n, 1)))
        inverse = 1.0 / (np.maximum(values, 0.0) + self.sigma2)
        A_inv = (vectors * inverse) @ vectors.T
        WT = self.W.matrix.T.toarray()
        dlogdet = np.array(
            [np.sum(A_inv * (self.W.matrix @ grads.matvec(i, WT))) for i in range(len(grads))]
        )
        return dlogdet, self.sigma2 * float(np.sum(inverse))

    def _scaled_logdet_gradient(self, grads: KuuGradient) -> Tuple[np.ndarray, float]:
        eig = self.Kuu.eig()
        lam = eig.clamped()
        n, m = self.n, eig.m
        k = min(n, m)
        scale = n / m
        denom = scale * lam[:k] + self.sigma2
        # clamped eigenvalues are constant in the hypers
        live = eig.eigenvalues[:k] > 0
        dlogdet = np.array(
            [
                np.sum(scale * grads.eigenvalues(i)[:k][live] / denom[live])
                for i in range(len(grads))
            ]
        )
        dlogdet_noise = self.sigma2 * float(np.sum(1.0 / denom)) + max(0, n - m)
        return dlogdet, dlogdet_noise
