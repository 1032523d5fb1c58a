"""Synthetic data generators for the experiments."""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import ConfigError
from ..core.types import Dataset

# (carrier frequency, modulation period, amplitude) of each component
INFILL_COMPONENTS = (
    (0.08, 80.0, 1.0),
    (0.23, 45.0, 0.7),
    (0.6, 120.0, 0.5),
)


def reconstruct_inputs(n: int, seed: int = 0, std: float = 5.0) -> np.ndarray:
    """n sorted inputs drawn from N(0, std^2)."""
    rng = np.random.default_rng(seed)
    return np.sort(rng.normal(0.0, std, size=n))


def infill_signal(
    n: int = 2000,
    span: Tuple[float, float] = (0.0, 200.0),
    noise: float = 0.1,
    seed: int = 0,
    components: Sequence[Tuple[float, float, float]] = INFILL_COMPONENTS,
) -> Tuple[np.ndarray, np.ndarray]:
    """Sum of amplitude-modulated sinusoids sampled on an equispaced time grid.

    Returns:
        (t, y) with y = sum_k a_k (1 + 0.5 sin(2 pi t / P_k)) sin(2 pi f_k t + phi_k) + noise
    """
    rng = np.random.default_rng(seed)
    t = np.linspace(span[0], span[1], n)
    y = np.zeros(n)
    for freq, period, amp in components:
        phase = rng.uniform(0.0, 2.0 * np.pi)
        y += amp * (1.0 + 0.5 * np.sin(2.0 * np.pi * t / period)) * np.sin(
            2.0 * np.pi * freq * t + phase
        )
    if noise > 0:
        y = y + noise * rng.standard_normal(n)
    return t, y


def split_gaps(
    t: np.ndarray, y: Optional[np.ndarray], gaps: Sequence[Tuple[float, float]]
) -> Tuple[np.ndarray, np.ndarray]:
    """Boolean (train, test) masks for contiguous gaps [lo, hi].

    Raises:
        ConfigError: If a gap lies outside the signal span or holds no points
    """
    lo_t, hi_t = float(np.min(t)), float(np.max(t))
    test = np.zeros(t.shape[0], dtype=bool)
    for lo, hi in gaps:
        if lo < lo_t or hi > hi_t:
            raise ConfigError(
                f"Gap ({lo}, {hi}) lies outside the signal span [{lo_t}, {hi_t}]",
                field="gaps",
                value=(lo, hi),
            )
        inside = (t >= lo) & (t <= hi)
        if not np.any(inside):
            raise ConfigError(f"Gap ({lo}, {hi}) contains no samples", field="gaps", value=(lo, hi))
        test |= inside
    return ~test, test


def gapped_dataset(t: np.ndarray, y: np.ndarray, gaps: Sequence[Tuple[float, float]]) -> Dataset:
    """Dataset with the gap samples moved to a test split (targets kept)."""
    train, test = split_gaps(t, y, gaps)
    if not np.any(test):
        return Dataset(t[:, None], y)
    return Dataset(t[train, None], y[train], X_test=t[test, None], y_test=y[test])


def default_gaps(
    span: Tuple[float, float], count: int = 12, fraction: float = 0.036, spacing: float = 0.0
) -> List[Tuple[float, float]]:
    """``count`` equal gaps centered in equal slices of the span.

    Together the gaps cover ``fraction`` of the span; each is at least two
    sample spacings wide so that it holds samples.
    """
    lo, hi = span
    width = hi - lo
    size = max(fraction * width / count, 2.0 * spacing)
    centers = lo + (np.arange(count) + 0.5) * width / count
    return [(float(c - 0.5 * size), float(c + 0.5 * size)) for c in centers]
