"""
Marginal-likelihood hyperparameter learning.

Maximizes log p(y | theta) over theta = [kernel raw hypers..., log sigma2] with
scipy's nonlinear conjugate gradients (Polak-Ribiere). Gradients are central
finite differences by default; with ``gradient="analytic"`` engines that have a
closed form (exact and SKI) return it from the same fit as the objective value.
Objective values are cached per theta, so the line search and the difference
stencils never refit a model twice.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.optimize
from loguru import logger
from numpy.typing import ArrayLike

from ..core.config import LearningConfig, config
from ..core.exceptions import SkiGPError, ValidationError
from ..core.validation import as_points, as_vector
from ..kernels.base import Kernel
from .base import GpModel


GRADIENT_SOURCES = ("difference", "analytic")


class _BudgetExhausted(Exception):
    pass


@dataclass
class LearningResult:
    """Outcome of :func:`learn_hypers`."""

    kernel: Kernel
    sigma2: float
    # Fitted at the best hypers with the model's own (inference) settings
    model: GpModel
    log_marginal_likelihood: float
    # Log marginal likelihood at the start and after each optimizer iteration
    trace: List[float] = field(default_factory=list)
    # Running maximum of every evaluated objective, one entry per iteration
    best_trace: List[float] = field(default_factory=list)
    evaluations: int = 0
    iterations: int = 0
    converged: bool = False
    flags: List[str] = field(default_factory=list)
    # Gradient source actually used: "analytic" or "difference"
    gradient: str = "difference"


class _Objective:
    """Negative log marginal likelihood and its gradient, with caching and a budget.

    Every model fit counts against ``max_evaluations``.
    """

    _FAILURES = (SkiGPError, np.linalg.LinAlgError, FloatingPointError)

    def __init__(self, model: GpModel, X: np.ndarray, y: np.ndarray, cfg: LearningConfig):
        self.model = model
        self.X = X
        self.y = y
        self.cfg = cfg
        self.analytic = cfg.gradient == "analytic" and model.has_lml_gradient
        self.values: Dict[bytes, float] = {}
        self.gradients: Dict[bytes, np.ndarray] = {}
        self.evaluations = 0
        self.best_value = np.inf
        self.best_theta: Optional[np.ndarray] = None
        self.failures = 0

    def _fit(self, theta: np.ndarray) -> GpModel:
        if self.evaluations >= self.cfg.max_evaluations:
            raise _BudgetExhausted()
        self.evaluations += 1
        trial = self.model.with_raw_hypers(theta, **self.model.learning_overrides())
        return trial.fit(self.X, self.y)

    def _store(self, key: bytes, theta: np.ndarray, value: float) -> float:
        if not np.isfinite(value):
            # finite penalty makes the line search back off
            self.failures += 1
            value = self.cfg.nan_penalty
        elif value < self.best_value:
            self.best_value = value
            self.best_theta = np.array(theta, dtype=float)
        self.values[key] = value
        return value

    def value(self, theta: np.ndarray) -> float:
        key = np.asarray(theta, dtype=float).tobytes()
        if key in self.values:
            return self.values[key]
        if self.analytic:
            return self.value_and_gradient(theta)[0]
        try:
            value = -self._fit(theta).log_marginal_likelihood()
        except self._FAILURES as e:
            logger.debug(f"Objective failed at {theta}: {e}")
            value = np.nan
        return self._store(key, theta, value)

    __call__ = value

    def value_and_gradient(self, theta: np.ndarray) -> Tuple[float, np.ndarray]:
        theta = np.asarray(theta, dtype=float)
        key = theta.tobytes()
        if key in self.gradients:
            return self.values[key], self.gradients[key]
        if not self.analytic:
            grad = self._difference_gradient(theta)
            value = self.value(theta)
        else:
            try:
                trial = self._fit(theta)
                value = -trial.log_marginal_likelihood()
                grad = -trial.log_marginal_likelihood_gradient()
            except self._FAILURES as e:
                logger.debug(f"Objective failed at {theta}: {e}")
                value, grad = np.nan, np.zeros_like(theta)
            value = self._store(key, theta, value)
            if not np.all(np.isfinite(grad)):
                grad = np.zeros_like(theta)
        self.gradients[key] = grad
        return value, grad

    def _difference_gradient(self, theta: np.ndarray) -> np.ndarray:
        h = self.cfg.fd_step
        grad = np.empty_like(theta)
        for i in range(theta.shape[0]):
            step = np.zeros_like(theta)
            step[i] = h
            grad[i] = (self.value(theta + step) - self.value(theta - step)) / (2.0 * h)
        return grad


def learn_hypers(
    model: GpModel,
    X: ArrayLike,
    y: ArrayLike,
    cfg: Optional[LearningConfig] = None,
) -> LearningResult:
    """Fit kernel hyperparameters and noise variance by maximizing the marginal likelihood.

    Args:
        model: Any GP engine; its kernel and sigma2 are the starting point
        X: Training inputs
        y: Training targets
        cfg: Optimizer settings (defaults to ``config.learning``)

    Returns:
        LearningResult with the best hypers found and per-iteration traces.
        An exhausted evaluation budget is reported as a flag, not raised.

    Raises:
        ValidationError: If ``cfg.gradient`` is not a known source
        SkiGPError: If the objective cannot be evaluated at the starting point
    """
    cfg = cfg or config.learning
    if cfg.gradient not in GRADIENT_SOURCES:
        raise ValidationError(
            f"Unknown gradient source '{cfg.gradient}'; expected one of {GRADIENT_SOURCES}",
            field="gradient",
            value=cfg.gradient,
        )
    pts = as_points(X, model.kernel.input_dim)
    targets = as_vector(y, size=pts.shape[0], name="y")
    objective = _Objective(model, pts, targets, cfg)

    theta0 = model.raw_hypers()
    start = objective(theta0)
    if objective.best_theta is None:
        raise SkiGPError(f"Log marginal likelihood is not finite at the initial hypers {theta0}")
    trace = [-start]
    best_trace = [-objective.best_value]

    def record(theta: np.ndarray) -> None:
        trace.append(-objective(theta))
        best_trace.append(-objective.best_value)
        logger.debug(f"Iteration {len(trace) - 1}: log marginal likelihood {trace[-1]:.6g}")

    flags: List[str] = []
    converged = False
    gradient = "analytic" if objective.analytic else "difference"
    logger.info(
        f"Learning {len(theta0)} hyperparameters for {model.scheme} model on "
        f"{pts.shape[0]} points ({gradient} gradients)"
    )
    try:
        result = scipy.optimize.minimize(
            objective.value_and_gradient,
            theta0,
            jac=True,
            method="CG",
            callback=record,
            options={"maxiter": cfg.max_iters, "gtol": cfg.gtol},
        )
        converged = bool(result.success)
        if not converged:
            flags.append(f"optimizer stopped: {result.message}")
    except _BudgetExhausted:
        message = f"evaluation budget of {cfg.max_evaluations} exhausted; returning best so far"
        logger.warning(message)
        flags.append(message)
    if objective.failures:
        flags.append(f"{objective.failures} objective evaluations were not finite")

    best = objective.best_theta
    fitted = model.with_raw_hypers(best).fit(pts, targets)
    lml = fitted.log_marginal_likelihood()
    logger.info(
        f"Learned hypers after {len(trace) - 1} iterations and {objective.evaluations} "
        f"evaluations: log marginal likelihood {lml:.6g}"
    )
    return LearningResult(
        kernel=fitted.kernel,
        sigma2=fitted.sigma2,
        model=fitted,
        log_marginal_likelihood=lml,
        trace=trace,
        best_trace=best_trace,
        evaluations=objective.evaluations,
        iterations=len(trace) - 1,
        converged=converged,
        flags=flags,
        gradient=gradient,
    )
