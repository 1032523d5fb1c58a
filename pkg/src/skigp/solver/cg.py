"""
Linear conjugate gradients for symmetric positive definite operators.

Plain (unpreconditioned) CG on a matrix-free operator. The recurrence residual
is replaced by the true residual b - A x every ``residual_refresh`` iterations,
and convergence is always confirmed against the true residual.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from ..core.config import config
from ..core.exceptions import ValidationError
from ..core.validation import as_vector

Operator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class CgConfig:
    """Stopping rules for :func:`cg_solve`."""

    tol: float = field(default_factory=lambda: config.solver.cg_tol)
    max_iters: int = field(default_factory=lambda: config.solver.cg_max_iters)
    # Log every iteration's relative residual at DEBUG level
    report: bool = False
    residual_refresh: int = field(default_factory=lambda: config.solver.residual_refresh)

    def __post_init__(self):
        if not self.tol > 0:
            raise ValidationError(f"tol must be positive, got {self.tol}", field="tol", value=self.tol)
        if self.max_iters < 1:
            raise ValidationError(
                f"max_iters must be at least 1, got {self.max_iters}",
                field="max_iters",
                value=self.max_iters,
            )
        if self.residual_refresh < 1:
            raise ValidationError(
                "residual_refresh must be at least 1",
                field="residual_refresh",
                value=self.residual_refresh,
            )


@dataclass
class SolveReport:
    """Outcome of a CG solve; ``converged`` implies ``residual <= tol``."""

    solution: np.ndarray
    iterations: int
    residual: float
    converged: bool
    # Relative residual after each iteration (entry 0 is the starting residual)
    trace: List[float] = field(default_factory=list)


def cg_solve(
    apply_A: Operator,
    b: ArrayLike,
    cfg: Optional[CgConfig] = None,
    x0: Optional[ArrayLike] = None,
) -> SolveReport:
    """Solve A x = b for symmetric positive definite A.

    Args:
        apply_A: Function computing A v
        b: Right-hand side
        cfg: Tolerance and iteration cap (defaults to ``CgConfig()``)
        x0: Optional starting point (zero by default)

    Returns:
        SolveReport; non-convergence is reported with ``converged=False``
        rather than raised
    """
    cfg = cfg or CgConfig()
    rhs = as_vector(b, name="b")
    b_norm = float(np.linalg.norm(rhs))
    if b_norm == 0.0:
        return SolveReport(np.zeros_like(rhs), 0, 0.0, True, [0.0])

    x = np.zeros_like(rhs) if x0 is None else as_vector(x0, size=rhs.shape[0], name="x0").copy()
    r = rhs - apply_A(x) if x0 is not None else rhs.copy()
    p = r.copy()
    rr = float(r @ r)
    residual = np.sqrt(rr) / b_norm
    trace = [residual]
    converged = residual <= cfg.tol
    iterations = 0

    while not converged and iterations < cfg.max_iters:
        Ap = apply_A(p)
        pAp = float(p @ Ap)
        if not pAp > 0:
            logger.warning(f"CG breakdown at iteration {iterations}: p^T A p = {pAp:.3g}")
            break
        alpha = rr / pAp
        x = x + alpha * p
        iterations += 1
        if iterations % cfg.residual_refresh == 0:
            r = rhs - apply_A(x)
        else:
            r = r - alpha * Ap
        rr_new = float(r @ r)
        residual = np.sqrt(rr_new) / b_norm
        trace.append(residual)
        if cfg.report:
            logger.debug(f"CG iteration {iterations}: relative residual {residual:.3e}")
        if residual <= cfg.tol:
            true_residual = float(np.linalg.norm(rhs - apply_A(x))) / b_norm
            if true_residual <= cfg.tol:
                residual = true_residual
                converged = True
                break
            # recurrence drifted; restart the direction from the true residual
            r = rhs - apply_A(x)
            rr_new = float(r @ r)
            residual = true_residual
            p = r.copy()
            rr = rr_new
            continue
        p = r + (rr_new / rr) * p
        rr = rr_new

    if not converged:
        logger.warning(
            f"CG did not converge: residual {residual:.3e} after {iterations} iterations "
            f"(tol {cfg.tol:.1e})"
        )
    else:
        logger.debug(f"CG converged in {iterations} iterations (residual {residual:.3e})")
    return SolveReport(x, iterations, float(residual), converged, trace)
