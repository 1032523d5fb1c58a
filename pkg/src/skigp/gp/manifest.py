"""
Versioned S-expression manifest for model state.

A manifest records everything needed to rebuild an unfitted model: scheme,
kernel family and named hypers, noise variance, mean, and the inducing grid or
points with the SKI settings. Example::

    (skigp_model
      (version 1)
      (scheme ski)
      (sigma2 0.01)
      (mean 0.0)
      (kernel (family rbf) (input_dim 1) (hyper lengthscale 2.0) (hyper signal_variance 1.0))
      (grid (axis (lo -10.0) (hi 10.0) (points 400)))
      (interp cubic)
      (structure auto))
"""

from pathlib import Path
from typing import Any, List, Optional, Union

import numpy as np
import sexpdata
from loguru import logger

from ..core.exceptions import ManifestError, SkiGPError
from ..interp.grid import ProductGrid
from ..kernels.base import Kernel
from ..kernels.registry import registry
from .base import GpModel
from .factory import Scheme, make_model
from .inducing import SoRGP
from .ski import SkiGP

MANIFEST_VERSION = 1

Sym = sexpdata.Symbol


def _symbol_name(obj: Any) -> Optional[str]:
    if isinstance(obj, sexpdata.Symbol):
        return str(obj)
    return None


def _find(sexp: List, name: str) -> Optional[List]:
    for item in sexp:
        if isinstance(item, list) and item and _symbol_name(item[0]) == name:
            return item
    return None


def _find_all(sexp: List, name: str) -> List[List]:
    return [
        item for item in sexp if isinstance(item, list) and item and _symbol_name(item[0]) == name
    ]


def _value(sexp: List, name: str, default: Any = None) -> Any:
    element = _find(sexp, name)
    if element is not None and len(element) > 1:
        value = element[1]
        return str(value) if isinstance(value, sexpdata.Symbol) else value
    return default


def _require(sexp: List, name: str) -> Any:
    value = _value(sexp, name)
    if value is None:
        raise ManifestError(f"Manifest is missing '{name}'", column=name)
    return value


# -- writing ---------------------------------------------------------------


def _kernel_sexp(kernel: Kernel, head: str = "kernel") -> List:
    family, pairs, input_dim, factors = registry.describe(kernel)
    sexp = [Sym(head), [Sym("family"), Sym(family)], [Sym("input_dim"), int(input_dim)]]
    for name, value in pairs:
        sexp.append([Sym("hyper"), Sym(name), float(value)])
    for factor_family, factor_pairs in factors or []:
        factor = [Sym("factor"), [Sym("family"), Sym(factor_family)]]
        for name, value in factor_pairs:
            factor.append([Sym("hyper"), Sym(name), float(value)])
        sexp.append(factor)
    return sexp


def _grid_sexp(grid: ProductGrid) -> List:
    sexp = [Sym("grid")]
    for axis, equispaced in zip(grid.axes, grid.equispaced_flags):
        if equispaced:
            sexp.append(
                [
                    Sym("axis"),
                    [Sym("lo"), float(axis[0])],
                    [Sym("hi"), float(axis[-1])],
                    [Sym("points"), int(axis.shape[0])],
                ]
            )
        else:
            sexp.append([Sym("axis"), [Sym("values")] + [float(v) for v in axis]])
    return sexp


def model_to_sexp(model: GpModel) -> List:
    """Manifest S-expression for a model."""
    mean = Sym("empirical") if model.mean_spec is None else float(model.mean_spec)
    sexp = [
        Sym("skigp_model"),
        [Sym("version"), MANIFEST_VERSION],
        [Sym("scheme"), Sym(model.scheme)],
        [Sym("sigma2"), float(model.sigma2)],
        [Sym("mean"), mean],
        _kernel_sexp(model.kernel),
    ]
    if isinstance(model, SoRGP):
        inducing = [Sym("inducing")]
        for point in model.inducing:
            inducing.append([Sym("point")] + [float(v) for v in point])
        sexp.append(inducing)
    if isinstance(model, SkiGP):
        sexp.append(_grid_sexp(model.grid))
        sexp.append([Sym("interp"), Sym(model.interp.value)])
        sexp.append([Sym("structure"), Sym(model.structure.value)])
        sexp.append([Sym("cross_cov"), Sym(model.cross_cov.value)])
        sexp.append([Sym("logdet"), Sym(model.logdet.value)])
        if model.idw_power is not None:
            sexp.append([Sym("idw_power"), float(model.idw_power)])
    return sexp


def dumps(model: GpModel) -> str:
    """Serialize a model manifest to text."""
    return sexpdata.dumps(model_to_sexp(model))


def save_model(model: GpModel, path: Union[str, Path]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(model))
        f.write("\n")
    logger.info(f"Wrote {model.scheme} model manifest to {path}")
    return path


# -- reading ---------------------------------------------------------------


def _hyper_pairs(sexp: List) -> List:
    pairs = []
    for item in _find_all(sexp, "hyper"):
        if len(item) != 3:
            raise ManifestError(f"Malformed hyper entry: {sexpdata.dumps(item)}", column="hyper")
        pairs.append((str(item[1]), float(item[2])))
    return pairs


def _kernel_from_sexp(sexp: List) -> Kernel:
    family = str(_require(sexp, "family"))
    input_dim = int(_value(sexp, "input_dim", 1))
    factors = [
        (str(_require(f, "family")), _hyper_pairs(f)) for f in _find_all(sexp, "factor")
    ]
    return registry.build(family, _hyper_pairs(sexp), input_dim, factors or None)


def _grid_from_sexp(sexp: List) -> ProductGrid:
    axes = []
    for axis in _find_all(sexp, "axis"):
        values = _find(axis, "values")
        if values is not None:
            axes.append(np.array([float(v) for v in values[1:]]))
        else:
            lo = float(_require(axis, "lo"))
            hi = float(_require(axis, "hi"))
            axes.append(np.linspace(lo, hi, int(_require(axis, "points"))))
    return ProductGrid(tuple(axes))


def model_from_sexp(sexp: List) -> GpModel:
    """Rebuild an unfitted model from a manifest S-expression.

    Raises:
        ManifestError: On a wrong header, unsupported version or missing field
    """
    if not isinstance(sexp, list) or not sexp or _symbol_name(sexp[0]) != "skigp_model":
        raise ManifestError("Not a skigp model manifest")
    version = _require(sexp, "version")
    if version != MANIFEST_VERSION:
        raise ManifestError(
            f"Unsupported manifest version {version} (expected {MANIFEST_VERSION})",
            column="version",
        )
    try:
        scheme = Scheme(str(_require(sexp, "scheme")))
    except ValueError as e:
        raise ManifestError(f"Unknown scheme in manifest: {e}", column="scheme") from e

    kernel_sexp = _find(sexp, "kernel")
    if kernel_sexp is None:
        raise ManifestError("Manifest is missing 'kernel'", column="kernel")
    mean_value = _value(sexp, "mean", 0.0)
    mean = None if mean_value == "empirical" else float(mean_value)

    try:
        kernel = _kernel_from_sexp(kernel_sexp)
        sigma2 = float(_require(sexp, "sigma2"))
        if scheme in (Scheme.SOR, Scheme.FITC):
            inducing_sexp = _find(sexp, "inducing")
            if inducing_sexp is None:
                raise ManifestError("Manifest is missing 'inducing'", column="inducing")
            points = np.array([[float(v) for v in p[1:]] for p in _find_all(inducing_sexp, "point")])
            return make_model(scheme, kernel, sigma2, mean, inducing=points)
        if scheme is Scheme.SKI:
            grid_sexp = _find(sexp, "grid")
            if grid_sexp is None:
                raise ManifestError("Manifest is missing 'grid'", column="grid")
            options = {
                key: _value(sexp, key)
                for key in ("interp", "structure", "cross_cov", "logdet", "idw_power")
                if _value(sexp, key) is not None
            }
            return make_model(scheme, kernel, sigma2, mean, grid=_grid_from_sexp(grid_sexp), **options)
        return make_model(scheme, kernel, sigma2, mean)
    except ManifestError:
        raise
    except (SkiGPError, ValueError, TypeError) as e:
        raise ManifestError(f"Invalid model manifest: {e}") from e


def loads(text: str) -> GpModel:
    """Parse manifest text into an unfitted model."""
    try:
        sexp = sexpdata.loads(text)
    except Exception as e:
        raise ManifestError(f"Manifest is not a valid S-expression: {e}") from e
    return model_from_sexp(sexp)


def load_model(path: Union[str, Path]) -> GpModel:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Model manifest not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        model = loads(f.read())
    logger.info(f"Loaded {model.scheme} model manifest from {path}")
    return model
