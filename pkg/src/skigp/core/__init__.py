"""Core configuration, exceptions and shared data types."""

from .config import SkiConfig, config
from .exceptions import (
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
from .types import METRICS_COLUMNS, Dataset, ExperimentResult, MetricsRow

__all__ = [
    "SkiConfig",
    "config",
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
    "Dataset",
    "MetricsRow",
    "ExperimentResult",
    "METRICS_COLUMNS",
]
