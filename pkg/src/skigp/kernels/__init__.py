"""Stationary covariance functions and their hyperparameters."""

from .base import Hypers, Kernel, toeplitz_column
from .product import ProductKernel
from .rbf import RBFKernel
from .registry import KernelRegistry, registry
from .spectral_mixture import SpectralMixtureKernel

__all__ = [
    "Hypers",
    "Kernel",
    "toeplitz_column",
    "RBFKernel",
    "SpectralMixtureKernel",
    "ProductKernel",
    "KernelRegistry",
    "registry",
]
