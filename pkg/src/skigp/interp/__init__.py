"""Inducing-point grids and sparse interpolation weights."""

from .grid import ProductGrid, kmeans_axis, kmeans_grid, padded_grid, regular_grid
from .sparse import InterpScheme, SparseWeights, build_W, spmv, spmv_t
from .weights import cubic_weights, idw_weights, keys_kernel, linear_weights

__all__ = [
    "ProductGrid",
    "regular_grid",
    "padded_grid",
    "kmeans_axis",
    "kmeans_grid",
    "InterpScheme",
    "SparseWeights",
    "build_W",
    "spmv",
    "spmv_t",
    "linear_weights",
    "cubic_weights",
    "idw_weights",
    "keys_kernel",
]
