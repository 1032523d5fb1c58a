"""Validation utilities for arrays and scalar arguments."""

from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from .exceptions import DimensionError, ValidationError


def as_points(X: ArrayLike, input_dim: Optional[int] = None, name: str = "X") -> np.ndarray:
    """Coerce inputs to a finite float array of shape (n, D).

    A 1D array is read as n one-dimensional points.

    Args:
        X: Input points
        input_dim: Required dimension D, or None to accept any
        name: Argument name used in error messages

    Returns:
        Float array of shape (n, D)

    Raises:
        DimensionError: If the shape is not (n,) or (n, D), or D mismatches
        ValidationError: If any value is not finite
    """
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise DimensionError(
            f"{name} must be 1D or 2D, got shape {arr.shape}", field=name, value=arr.shape
        )
    if input_dim is not None and arr.shape[1] != input_dim:
        raise DimensionError(
            f"{name} has dimension {arr.shape[1]}, expected {input_dim}",
            field=name,
            value=arr.shape[1],
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values", field=name)
    return arr


def as_vector(v: ArrayLike, size: Optional[int] = None, name: str = "v") -> np.ndarray:
    """Coerce to a 1D float array, optionally of a given length.

    Args:
        v: Input values
        size: Required length, or None to accept any
        name: Argument name used in error messages

    Returns:
        1D float array

    Raises:
        DimensionError: If not 1D or the length mismatches
    """
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be 1D, got shape {arr.shape}", field=name)
    if size is not None and arr.shape[0] != size:
        raise DimensionError(
            f"{name} has length {arr.shape[0]}, expected {size}", field=name, value=arr.shape[0]
        )
    return arr


def require_positive(value: float, name: str) -> float:
    """Check that a scalar is finite and strictly positive.

    Raises:
        ValidationError: If the check fails
    """
    if not np.isfinite(value) or value <= 0:
        raise ValidationError(f"{name} must be positive, got {value}", field=name, value=value)
    return float(value)


def is_equispaced(axis: np.ndarray, rtol: float) -> bool:
    """Check whether a sorted 1D axis has constant spacing.

    Axes of one or two points are trivially equispaced.

    Args:
        axis: Sorted 1D points
        rtol: Allowed deviation of any spacing from the mean, relative to the mean

    Returns:
        True if every spacing lies within rtol of the mean spacing
    """
    if axis.shape[0] <= 2:
        return True
    steps = np.diff(axis)
    mean_step = (axis[-1] - axis[0]) / (axis.shape[0] - 1)
    return bool(np.max(np.abs(steps - mean_step)) <= rtol * abs(mean_step))
