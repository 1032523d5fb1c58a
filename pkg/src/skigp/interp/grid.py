"""
Inducing-point grids.

A :class:`ProductGrid` is the Cartesian product of per-dimension sorted 1D
axes. Flat grid indices follow C order (the first axis varies slowest), which
matches the factor order of K_1 (x) K_2 (x) ... (x) K_D.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from ..core.config import config
from ..core.exceptions import GridError
from ..core.validation import as_points, as_vector, is_equispaced


@dataclass(frozen=True, eq=False)
class ProductGrid:
    """Cartesian product of sorted 1D axes; m = prod(len(axis))."""

    axes: Tuple[np.ndarray, ...]
    equispaced_flags: Tuple[bool, ...] = field(init=False)

    def __post_init__(self):
        if len(self.axes) == 0:
            raise GridError("A grid needs at least one axis", field="axes")
        frozen = []
        for d, axis in enumerate(self.axes):
            arr = np.array(axis, dtype=float).reshape(-1)
            if arr.shape[0] < 2:
                raise GridError(
                    f"Axis {d} has {arr.shape[0]} points; at least 2 are required",
                    field="axes",
                    value=arr.shape[0],
                )
            if not np.all(np.isfinite(arr)) or np.any(np.diff(arr) <= 0):
                raise GridError(f"Axis {d} must be finite and strictly increasing", field="axes")
            arr.flags.writeable = False
            frozen.append(arr)
        rtol = config.interp.equispaced_rtol
        object.__setattr__(self, "axes", tuple(frozen))
        object.__setattr__(
            self, "equispaced_flags", tuple(is_equispaced(a, rtol) for a in frozen)
        )

    @property
    def input_dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(a.shape[0] for a in self.axes)

    @property
    def m(self) -> int:
        """Total number of grid points."""
        return int(np.prod(self.shape))

    @property
    def bounds(self) -> List[Tuple[float, float]]:
        return [(float(a[0]), float(a[-1])) for a in self.axes]

    def spacing(self, d: int) -> float:
        """Mean spacing of axis d."""
        a = self.axes[d]
        return float((a[-1] - a[0]) / (a.shape[0] - 1))

    def points(self) -> np.ndarray:
        """All m grid points as an (m, D) array in flat-index order."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([g.reshape(-1) for g in mesh], axis=1)

    def covers(self, X: ArrayLike) -> bool:
        """True if every input lies inside the grid's bounding box."""
        pts = as_points(X, self.input_dim)
        lo = np.array([a[0] for a in self.axes])
        hi = np.array([a[-1] for a in self.axes])
        return bool(np.all(pts >= lo) and np.all(pts <= hi))

    def __repr__(self) -> str:
        dims = " x ".join(str(n) for n in self.shape)
        return f"ProductGrid({dims}, equispaced={list(self.equispaced_flags)})"


def regular_grid(
    bounds: Sequence[Tuple[float, float]], points_per_axis: Sequence[int]
) -> ProductGrid:
    """Equispaced grid from lo to hi inclusive on every axis.

    Args:
        bounds: One (lo, hi) pair per dimension
        points_per_axis: Number of points per dimension (at least 2)

    Raises:
        GridError: On lo >= hi, fewer than 2 points, or a length mismatch
    """
    bounds = list(bounds)
    counts = list(points_per_axis)
    if len(bounds) != len(counts):
        raise GridError(
            f"{len(bounds)} bounds but {len(counts)} point counts", field="points_per_axis"
        )
    axes = []
    for d, ((lo, hi), count) in enumerate(zip(bounds, counts)):
        if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
            raise GridError(f"Degenerate bounds ({lo}, {hi}) on axis {d}", field="bounds")
        if int(count) < 2:
            raise GridError(
                f"Axis {d} needs at least 2 points, got {count}",
                field="points_per_axis",
                value=count,
            )
        axes.append(np.linspace(lo, hi, int(count)))
    return ProductGrid(tuple(axes))


def padded_grid(
    X: ArrayLike, points_per_axis: Sequence[int], padding_cells: Optional[int] = None
) -> ProductGrid:
    """Equispaced grid covering the data with extra cells on each side.

    With the default two cells of padding every input is interior to the cubic
    stencil.

    Args:
        X: (n, D) data the grid must cover
        points_per_axis: Grid points per dimension
        padding_cells: Cells added beyond the data on each side
            (defaults to ``config.interp.padding_cells``)

    Raises:
        GridError: If an axis has too few points for the requested padding
    """
    pts = as_points(X)
    pad = config.interp.padding_cells if padding_cells is None else int(padding_cells)
    counts = list(points_per_axis)
    if len(counts) != pts.shape[1]:
        raise GridError(
            f"Data has {pts.shape[1]} dimensions but {len(counts)} point counts given",
            field="points_per_axis",
        )
    bounds = []
    for d, count in enumerate(counts):
        lo, hi = float(pts[:, d].min()), float(pts[:, d].max())
        if hi <= lo:
            lo, hi = lo - 0.5, hi + 0.5
        inner = int(count) - 1 - 2 * pad
        if inner < 1:
            raise GridError(
                f"Axis {d} with {count} points cannot hold {pad} padding cells per side",
                field="points_per_axis",
                value=count,
            )
        step = (hi - lo) / inner
        bounds.append((lo - pad * step, hi + pad * step))
    grid = regular_grid(bounds, counts)
    logger.debug(f"Padded grid {grid} over data bounds with {pad} cells per side")
    return grid


def _assign(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Nearest-center labels for sorted 1D centers."""
    midpoints = 0.5 * (centers[:-1] + centers[1:])
    return np.searchsorted(midpoints, x, side="left")


def kmeans_axis(
    X1d: ArrayLike, m: int, seed: int = 0, max_iters: Optional[int] = None
) -> np.ndarray:
    """Sorted 1D cluster centers from Lloyd's algorithm with k-means++ seeding.

    Iterates until assignments stop changing or the iteration cap is hit.
    Emptied clusters are re-seeded at the farthest inputs whose values are not
    already centers, so m distinct inputs always give m distinct centers.

    Args:
        X1d: n real inputs
        m: Number of centers (2 <= m <= number of distinct inputs)
        seed: Seed for the k-means++ draws
        max_iters: Iteration cap (defaults to ``config.interp.kmeans_max_iters``)

    Returns:
        Strictly increasing array of m centers

    Raises:
        GridError: If m < 2 or m exceeds the number of distinct inputs
    """
    x = as_vector(X1d, name="X1d")
    cap = config.interp.kmeans_max_iters if max_iters is None else int(max_iters)
    distinct = np.unique(x)
    if m < 2:
        raise GridError(f"k-means needs m >= 2, got {m}", field="m", value=m)
    if m > distinct.shape[0]:
        raise GridError(
            f"m={m} exceeds the {distinct.shape[0]} distinct inputs", field="m", value=m
        )

    rng = np.random.default_rng(seed)
    n = x.shape[0]
    centers = [x[rng.integers(n)]]
    d2 = (x - centers[0]) ** 2
    for _ in range(1, m):
        idx = rng.choice(n, p=d2 / d2.sum())
        centers.append(x[idx])
        d2 = np.minimum(d2, (x - x[idx]) ** 2)
    c = np.sort(np.asarray(centers))

    labels = _assign(x, c)
    iterations = 0
    for iterations in range(1, cap + 1):
        counts = np.bincount(labels, minlength=m)
        sums = np.bincount(labels, weights=x, minlength=m)
        new_c = c.copy()
        filled = counts > 0
        new_c[filled] = sums[filled] / counts[filled]
        empty = np.flatnonzero(~filled)
        if empty.size:
            # farthest inputs first, skipping values already used as centers
            order = np.argsort(-np.abs(x - new_c[labels]), kind="stable")
            candidates = x[order][~np.isin(x[order], new_c[filled])]
            _, first = np.unique(candidates, return_index=True)
            new_c[empty] = candidates[np.sort(first)][: empty.size]
        c = np.sort(new_c)
        new_labels = _assign(x, c)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels

    unique = np.unique(c)
    if unique.shape[0] < m:
        logger.warning(f"k-means produced {m - unique.shape[0]} coincident centers; merged")
    logger.debug(f"k-means: {unique.shape[0]} centers after {iterations} iterations")
    return unique


def kmeans_grid(X: ArrayLike, points_per_axis: Sequence[int], seed: int = 0) -> ProductGrid:
    """Irregular product grid of per-axis k-means centers.

    The data minimum and maximum are appended to each axis so that the grid
    covers every input.
    """
    pts = as_points(X)
    counts = list(points_per_axis)
    if len(counts) != pts.shape[1]:
        raise GridError(
            f"Data has {pts.shape[1]} dimensions but {len(counts)} point counts given",
            field="points_per_axis",
        )
    axes = []
    for d, count in enumerate(counts):
        centers = kmeans_axis(pts[:, d], int(count), seed=seed + d)
        axes.append(np.union1d(centers, [pts[:, d].min(), pts[:, d].max()]))
    return ProductGrid(tuple(axes))
