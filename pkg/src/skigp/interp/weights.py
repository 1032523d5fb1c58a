"""
Local interpolation weights on a single 1D axis.

Each function accepts a scalar or an array of query points and returns
``(indices, weights)``; for an array of n queries both have shape (n, c),
for a scalar they have shape (c,). Cells are left-closed: a query equal to a
node is placed in the cell starting at that node, which makes every
node-coincident query a one-hot row.
"""

from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from ..core.config import config
from ..core.exceptions import GridError, OutOfRangeError, StructureError
from ..core.validation import is_equispaced

WeightPair = Tuple[np.ndarray, np.ndarray]


def keys_kernel(s: ArrayLike) -> np.ndarray:
    """Keys cubic convolution kernel u(s) with a = -1/2.

    Supported on |s| <= 2; u(0) = 1 and u(+-1) = u(+-2) = 0.
    """
    s = np.abs(np.asarray(s, dtype=float))
    if np.any(s > 2):
        raise ValueError("only absolute values <= 2 allowed")
    out = np.zeros_like(s)
    near = s <= 1
    out[near] = ((1.5 * s[near] - 2.5) * s[near]) * s[near] + 1
    far = ~near
    out[far] = ((-0.5 * s[far] + 2.5) * s[far] - 4) * s[far] + 2
    return out


def _prepare(x: ArrayLike, axis: ArrayLike) -> Tuple[np.ndarray, np.ndarray, bool]:
    u = np.asarray(axis, dtype=float).reshape(-1)
    if u.shape[0] < 2:
        raise GridError("Interpolation axis needs at least 2 points", field="axis")
    scalar = np.ndim(x) == 0
    q = np.atleast_1d(np.asarray(x, dtype=float)).reshape(-1)
    outside = (q < u[0]) | (q > u[-1]) | ~np.isfinite(q)
    if np.any(outside):
        bad = q[outside][0]
        raise OutOfRangeError(
            f"Input {bad} lies outside the grid span [{u[0]}, {u[-1]}]; grids must cover the data",
            field="x",
            value=float(bad),
        )
    return q, u, scalar


def _cells(q: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Index j of the left-closed cell [u_j, u_{j+1}) holding each query."""
    j = np.searchsorted(u, q, side="right") - 1
    return np.clip(j, 0, u.shape[0] - 2)


def _finish(idx: np.ndarray, w: np.ndarray, scalar: bool) -> WeightPair:
    if scalar:
        return idx[0], w[0]
    return idx, w


def linear_weights(x: ArrayLike, axis: ArrayLike) -> WeightPair:
    """Two-point linear interpolation weights.

    The bracketing nodes u_a <= x <= u_b receive the relative distances
    (1 - t, t) with t = (x - u_a) / (u_b - u_a).

    Raises:
        OutOfRangeError: If any query lies outside the axis span
    """
    q, u, scalar = _prepare(x, axis)
    j = _cells(q, u)
    t = (q - u[j]) / (u[j + 1] - u[j])
    idx = np.stack([j, j + 1], axis=1)
    w = np.stack([1.0 - t, t], axis=1)
    return _finish(idx, w, scalar)


def idw_weights(x: ArrayLike, axis: ArrayLike, power: Optional[float] = None) -> WeightPair:
    """Inverse distance weights over the two bracketing nodes.

    Weights are proportional to 1 / distance**power and normalized to sum to 1;
    a query on a node puts weight 1 there. Works on irregular axes.

    Args:
        x: Query point(s)
        axis: Sorted 1D nodes (need not be equispaced)
        power: Shepard exponent (defaults to ``config.interp.idw_power``)
    """
    p = config.interp.idw_power if power is None else float(power)
    q, u, scalar = _prepare(x, axis)
    j = _cells(q, u)
    d_left = (q - u[j]) ** p
    d_right = (u[j + 1] - q) ** p
    total = d_left + d_right
    idx = np.stack([j, j + 1], axis=1)
    w = np.stack([d_right / total, d_left / total], axis=1)
    return _finish(idx, w, scalar)


def _lagrange4(s: np.ndarray) -> np.ndarray:
    """Cubic Lagrange weights for nodes 0, 1, 2, 3 at local coordinate s."""
    return np.stack(
        [
            -(s - 1) * (s - 2) * (s - 3) / 6.0,
            s * (s - 2) * (s - 3) / 2.0,
            -s * (s - 1) * (s - 3) / 2.0,
            s * (s - 1) * (s - 2) / 6.0,
        ],
        axis=1,
    )


def cubic_weights(x: ArrayLike, axis: ArrayLike, rtol: Optional[float] = None) -> WeightPair:
    """Four-point cubic convolution weights (Keys, a = -1/2).

    Interior cells use the stencil j-1 .. j+2 with weights u(f+1), u(f), u(1-f),
    u(2-f). In the first and last cell the stencil shifts inward to the four
    edge nodes and the weights are the cubic Lagrange weights on that stencil,
    which keeps four weights per row summing to 1.

    Raises:
        GridError: If the axis has fewer than 4 points
        StructureError: If the axis is not equispaced
        OutOfRangeError: If any query lies outside the axis span
    """
    q, u, scalar = _prepare(x, axis)
    size = u.shape[0]
    if size < 4:
        raise GridError(f"Cubic interpolation needs 4 or more nodes, got {size}", field="axis")
    tol = config.interp.equispaced_rtol if rtol is None else rtol
    if not is_equispaced(u, tol):
        raise StructureError("Cubic interpolation requires an equispaced axis")

    h = (u[-1] - u[0]) / (size - 1)
    j = _cells(q, u)
    f = np.clip((q - u[j]) / h, 0.0, 1.0)

    start = np.clip(j - 1, 0, size - 4)
    idx = start[:, None] + np.arange(4)[None, :]
    w = np.empty((q.shape[0], 4))

    interior = (j >= 1) & (j <= size - 3)
    fi = f[interior]
    w[interior] = np.stack(
        [keys_kernel(fi + 1), keys_kernel(fi), keys_kernel(1 - fi), keys_kernel(2 - fi)], axis=1
    )
    edge = ~interior
    if np.any(edge):
        # local coordinate of the query relative to the first stencil node
        s = (j[edge] - start[edge]) + f[edge]
        w[edge] = _lagrange4(s)
    return _finish(idx, w, scalar)
