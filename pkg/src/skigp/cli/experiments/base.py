"""Base experiment class."""

import time
from abc import ABC, abstractmethod
from typing import Any, Callable, Tuple

import numpy as np
from loguru import logger

from ...core.types import ExperimentResult
from ..config_file import ExperimentConfig


class BaseExperiment(ABC):
    """Base class for all experiments.

    An experiment owns a validated configuration and a seeded random
    generator, and produces an :class:`ExperimentResult`.
    """

    name: str = ""

    def __init__(self, cfg: ExperimentConfig):
        """Initialize experiment with its configuration.

        Args:
            cfg: Validated experiment configuration
        """
        self._cfg = cfg
        self._rng = np.random.default_rng(cfg.seed)

    @property
    def cfg(self) -> ExperimentConfig:
        """Get the experiment configuration."""
        return self._cfg

    @property
    def rng(self) -> np.random.Generator:
        return self._rng

    def run(self) -> ExperimentResult:
        """Run the experiment and log its duration."""
        logger.info(f"Starting {self.name} experiment (seed {self.cfg.seed})")
        start = time.perf_counter()
        result = self._run()
        logger.info(
            f"Finished {self.name} experiment in {time.perf_counter() - start:.2f}s "
            f"({len(result.rows)} metrics rows)"
        )
        return result

    @abstractmethod
    def _run(self) -> ExperimentResult:
        """Experiment body."""


def timed(fn: Callable[[], Any]) -> Tuple[Any, float]:
    """Call fn and return (result, wall seconds)."""
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start
