"""Command-line harness: configuration, data I/O and experiments."""

from .config_file import ExperimentConfig, load_config, parse_config
from .io import emit_metrics, export_csv, ingest_csv
from .main import main

__all__ = [
    "ExperimentConfig",
    "parse_config",
    "load_config",
    "ingest_csv",
    "export_csv",
    "emit_metrics",
    "main",
]
