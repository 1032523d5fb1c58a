"""Conjugate gradient solves and log-determinants."""

from .cg import CgConfig, SolveReport, cg_solve
from .logdet import logdet_exact, logdet_scaled

__all__ = ["CgConfig", "SolveReport", "cg_solve", "logdet_exact", "logdet_scaled"]
