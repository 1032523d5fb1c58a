"""Structured K_UU operators: dense, symmetric Toeplitz and Kronecker."""

from .base import EigenSystem, StructuredKuu
from .dense import DenseKuu
from .fft import fft, ifft, next_pow2
from .kronecker import KroneckerKuu, kron_matvec
from .toeplitz import ToeplitzKuu, toeplitz_matvec


def matvec(A: StructuredKuu, v):
    """A v for any structured form."""
    return A.matvec(v)


def eig(A: StructuredKuu) -> EigenSystem:
    """Cached eigensystem of A."""
    return A.eig()


def to_dense(A: StructuredKuu, cap=None):
    """Dense expansion of A (capped)."""
    return A.to_dense(cap)


__all__ = [
    "StructuredKuu",
    "EigenSystem",
    "DenseKuu",
    "ToeplitzKuu",
    "KroneckerKuu",
    "kron_matvec",
    "toeplitz_matvec",
    "fft",
    "ifft",
    "next_pow2",
    "matvec",
    "eig",
    "to_dense",
]
