"""Configuration system for skigp.

Provides centralized numerical settings for interpolation, structured algebra,
iterative solves, jitter and hyperparameter learning. Can be customized
per-run by modifying the global instance or passing explicit arguments.
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict


@dataclass
class InterpConfig:
    """Configuration for inducing grids and interpolation weights."""

    # Relative tolerance on spacing deviation for an axis to count as equispaced
    equispaced_rtol: float = 1e-9

    # Cubic stencil cells added on each side of the data when padding a grid
    padding_cells: int = 2

    # Lloyd iteration cap for k-means grids
    kmeans_max_iters: int = 100

    # Shepard exponent for inverse distance weighting
    idw_power: float = 1.0


@dataclass
class StructureConfig:
    """Configuration for structured K_UU operators."""

    # Largest matrix size to_dense will expand
    dense_cap: int = 4096

    # Largest per-axis factor the dense symmetric eigensolver accepts
    eig_cap: int = 5000

    # Absolute symmetry tolerance, relative to max |A_ij|
    symmetry_rtol: float = 1e-12


@dataclass
class SolverConfig:
    """Configuration for conjugate gradients and log-determinants."""

    # Relative residual target for inference solves
    cg_tol: float = 1e-8

    # Looser target used inside marginal-likelihood evaluations during learning
    learning_cg_tol: float = 1e-4

    # Iteration cap per solve
    cg_max_iters: int = 1000

    # Recompute the true residual b - A x every this many iterations
    residual_refresh: int = 50

    # Use the exact dense log-determinant of K_SKI when n is at most this
    exact_logdet_max_n: int = 1000


@dataclass
class JitterConfig:
    """Diagonal jitter policy, as multiples of the prior variance k(0)."""

    jitter: float = 1e-8
    retry_jitter: float = 1e-6


@dataclass
class LearningConfig:
    """Configuration for marginal-likelihood hyperparameter learning."""

    # Central finite-difference step in log-space
    fd_step: float = 1e-4

    # "difference" (central differences) or "analytic" (closed form where the
    # engine has one, differences otherwise)
    gradient: str = "difference"

    # Nonlinear conjugate gradient iteration cap
    max_iters: int = 100

    # Objective evaluation budget (gradients included)
    max_evaluations: int = 2000

    # Gradient-norm stopping tolerance
    gtol: float = 1e-5

    # Finite penalty returned for non-finite objective values
    nan_penalty: float = 1e10


@dataclass
class SkiConfig:
    """Main configuration class for skigp.

    Holds all sub-configurations and provides centralized access to settings.
    Library functions fall back to the global instance when no explicit value
    is passed.
    """

    interp: InterpConfig = field(default_factory=InterpConfig)
    structure: StructureConfig = field(default_factory=StructureConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    jitter: JitterConfig = field(default_factory=JitterConfig)
    learning: LearningConfig = field(default_factory=LearningConfig)

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary.

        Returns:
            Dictionary representation of configuration
        """
        return asdict(self)


# Global default configuration instance
# Can be modified: config.solver.cg_tol = 1e-10
# Or replaced: config = SkiConfig(solver=SolverConfig(cg_tol=1e-10))
config = SkiConfig()
