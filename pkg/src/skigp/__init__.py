"""
skigp - Structured Kernel Interpolation for Gaussian processes

Scalable GP regression through sparse interpolation onto a structured grid of
inducing points (KISS-GP), with exact, SoR and FITC baselines, hyperparameter
learning and a command-line harness for the reconstruction, kernel learning and
infill experiments.

Example usage:
    import numpy as np
    import skigp

    X = np.linspace(0, 10, 500)[:, None]
    y = np.sin(X[:, 0]) + 0.1 * np.random.default_rng(0).standard_normal(500)

    grid = skigp.padded_grid(X, [200])
    model = skigp.make_model("ski", skigp.RBFKernel(1.0, 1.0), 0.01, grid=grid)
    model.fit(X, y)
    mean = model.predict_mean(np.array([[2.5], [7.5]]))

    result = skigp.learn_hypers(model, X, y)
    print(result.kernel, result.sigma2)
"""

from .core.config import SkiConfig, config
from .core.exceptions import (
    ConfigError,
    DimensionError,
    GridError,
    ManifestError,
    NotFittedError,
    NotPositiveDefiniteError,
    OutOfRangeError,
    ParseError,
    SizeLimitError,
    SkiGPError,
    StructureError,
    ValidationError,
)
from .core.types import Dataset, MetricsRow

# Kernels
from .kernels import Kernel, ProductKernel, RBFKernel, SpectralMixtureKernel, registry

# Interpolation
from .interp import ProductGrid, build_W, kmeans_grid, padded_grid, regular_grid

# Structured algebra and solvers
from .structla import DenseKuu, KroneckerKuu, ToeplitzKuu
from .solver import CgConfig, cg_solve, logdet_exact, logdet_scaled

# Models
from .gp import (
    ExactGP,
    FITCGP,
    SkiGP,
    SoRGP,
    dumps,
    learn_hypers,
    load_model,
    loads,
    make_model,
    sample_prior,
    save_model,
)

__version__ = "0.1.0"

__all__ = [
    # Configuration
    "config",
    "SkiConfig",

    # Exceptions
    "SkiGPError",
    "ValidationError",
    "DimensionError",
    "GridError",
    "OutOfRangeError",
    "SizeLimitError",
    "ConfigError",
    "StructureError",
    "NotPositiveDefiniteError",
    "NotFittedError",
    "ParseError",
    "ManifestError",

    # Types
    "Dataset",
    "MetricsRow",

    # Kernels
    "Kernel",
    "RBFKernel",
    "SpectralMixtureKernel",
    "ProductKernel",
    "registry",

    # Interpolation
    "ProductGrid",
    "regular_grid",
    "padded_grid",
    "kmeans_grid",
    "build_W",

    # Structured algebra
    "DenseKuu",
    "ToeplitzKuu",
    "KroneckerKuu",
    "CgConfig",
    "cg_solve",
    "logdet_exact",
    "logdet_scaled",

    # Models
    "ExactGP",
    "SoRGP",
    "FITCGP",
    "SkiGP",
    "make_model",
    "learn_hypers",
    "sample_prior",
    "save_model",
    "load_model",
    "dumps",
    "loads",
]
