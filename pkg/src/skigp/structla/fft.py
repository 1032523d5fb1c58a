"""
Self-contained iterative radix-2 FFT.

Transforms run along axis 0 so that a block of vectors (L, k) is handled in one
pass. Bit-reversal permutations and per-stage twiddles are cached as read-only
arrays; all scratch storage is allocated per call.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike

from ..core.exceptions import ValidationError


def next_pow2(n: int) -> int:
    """Smallest power of two >= n (1 for n <= 1)."""
    return 1 if n <= 1 else 1 << (int(n) - 1).bit_length()


def is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@lru_cache(maxsize=64)
def _bit_reversal(size: int) -> np.ndarray:
    bits = size.bit_length() - 1
    idx = np.arange(size)
    rev = np.zeros(size, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    rev.flags.writeable = False
    return rev


@lru_cache(maxsize=64)
def _twiddles(size: int) -> Tuple[np.ndarray, ...]:
    stages = []
    half = 1
    while half < size:
        w = np.exp(-2j * np.pi * np.arange(half) / (2 * half))
        w.flags.writeable = False
        stages.append(w)
        half *= 2
    return tuple(stages)


def fft(x: ArrayLike) -> np.ndarray:
    """Forward DFT along axis 0; the length must be a power of two.

    Raises:
        ValidationError: If the length is not a power of two
    """
    arr = np.asarray(x, dtype=complex)
    size = arr.shape[0]
    if not is_pow2(size):
        raise ValidationError(f"FFT length {size} is not a power of two", field="x", value=size)
    rest = arr.shape[1:]
    out = arr[_bit_reversal(size)]
    half = 1
    for w in _twiddles(size):
        blocks = out.reshape((size // (2 * half), 2, half) + rest)
        even = blocks[:, 0]
        odd = blocks[:, 1] * w.reshape((half,) + (1,) * len(rest))
        out = np.stack([even + odd, even - odd], axis=1).reshape((size,) + rest)
        half *= 2
    return out


def ifft(x: ArrayLike) -> np.ndarray:
    """Inverse DFT along axis 0 (normalized by 1/L)."""
    arr = np.asarray(x, dtype=complex)
    return np.conj(fft(np.conj(arr))) / arr.shape[0]
