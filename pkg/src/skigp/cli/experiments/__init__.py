"""Experiment runners."""

from typing import Dict, Type

from .base import BaseExperiment
from .infill import InfillExperiment
from .kernel_learning import KernelLearningExperiment
from .reconstruct import ReconstructExperiment

EXPERIMENTS: Dict[str, Type[BaseExperiment]] = {
    ReconstructExperiment.name: ReconstructExperiment,
    KernelLearningExperiment.name: KernelLearningExperiment,
    InfillExperiment.name: InfillExperiment,
}

__all__ = [
    "BaseExperiment",
    "ReconstructExperiment",
    "KernelLearningExperiment",
    "InfillExperiment",
    "EXPERIMENTS",
]
