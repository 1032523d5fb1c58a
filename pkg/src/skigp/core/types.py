"""
Data types shared across skigp.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .exceptions import DimensionError, ValidationError
from .validation import as_points, as_vector


@dataclass
class Dataset:
    """Regression dataset with an optional test split.

    ``X_test`` without ``y_test`` marks test points whose targets are unknown
    (gaps read from a CSV with missing cells).
    """

    X: np.ndarray
    y: np.ndarray
    X_test: Optional[np.ndarray] = None
    y_test: Optional[np.ndarray] = None

    def __post_init__(self):
        self.X = as_points(self.X, name="X")
        self.y = as_vector(self.y, size=self.X.shape[0], name="y")
        if self.X.shape[0] < 1:
            raise ValidationError("Dataset needs at least one training point", field="X")
        if not np.all(np.isfinite(self.y)):
            raise ValidationError("y contains non-finite values", field="y")
        if self.X_test is not None:
            self.X_test = as_points(self.X_test, input_dim=self.input_dim, name="X_test")
            if self.y_test is not None:
                self.y_test = as_vector(self.y_test, size=self.X_test.shape[0], name="y_test")
        elif self.y_test is not None:
            raise DimensionError("y_test given without X_test", field="y_test")

    @property
    def n(self) -> int:
        """Number of training points."""
        return self.X.shape[0]

    @property
    def input_dim(self) -> int:
        """Input dimension D."""
        return self.X.shape[1]

    @property
    def n_test(self) -> int:
        """Number of test points (0 without a test split)."""
        return 0 if self.X_test is None else self.X_test.shape[0]

    def bounds(self, include_test: bool = True) -> List[Tuple[float, float]]:
        """Per-dimension (min, max) over training and optionally test inputs."""
        pts = self.X
        if include_test and self.X_test is not None and self.n_test:
            pts = np.vstack([self.X, self.X_test])
        return [(float(lo), float(hi)) for lo, hi in zip(pts.min(axis=0), pts.max(axis=0))]


METRICS_COLUMNS = (
    "method",
    "m",
    "build_time_s",
    "solve_time_s",
    "mae",
    "smae",
    "logdet_err",
    "notes",
)


@dataclass
class MetricsRow:
    """One row of experiment metrics.

    ``smae`` and ``logdet_err`` stay NaN when not applicable.
    """

    method: str
    m: int
    build_time_s: float = 0.0
    solve_time_s: float = 0.0
    mae: float = math.nan
    smae: float = math.nan
    logdet_err: float = math.nan
    notes: str = ""

    def __post_init__(self):
        if self.build_time_s < 0 or self.solve_time_s < 0:
            raise ValidationError("Timings must be non-negative", field="time")

    def values(self) -> Tuple[object, ...]:
        """Row values in ``METRICS_COLUMNS`` order."""
        return tuple(getattr(self, name) for name in METRICS_COLUMNS)


@dataclass
class ExperimentResult:
    """Output of an experiment run."""

    experiment: str
    rows: List[MetricsRow] = field(default_factory=list)
    # Extra named tables (e.g. learned kernel curves), each a header plus rows
    tables: dict = field(default_factory=dict)
    # Model manifests (S-expression text) keyed by method name
    models: dict = field(default_factory=dict)
    # Optimizer traces (log marginal likelihood per iteration) keyed by method name
    traces: dict = field(default_factory=dict)
    # CG relative residual per iteration of the last solve, keyed by model name
    solves: dict = field(default_factory=dict)
    flags: List[str] = field(default_factory=list)
