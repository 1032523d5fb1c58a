"""Model factory for building any GP engine from a scheme name."""

from enum import Enum
from typing import Optional, Union

from numpy.typing import ArrayLike

from ..core.exceptions import ValidationError
from ..interp.grid import ProductGrid
from ..kernels.base import Kernel
from .base import GpModel
from .exact import ExactGP
from .inducing import FITCGP, SoRGP
from .ski import SkiGP


class Scheme(str, Enum):
    """GP engine names used in configs and manifests."""

    EXACT = "exact"
    SOR = "sor"
    FITC = "fitc"
    SKI = "ski"


MODEL_CLASSES = {
    Scheme.EXACT: ExactGP,
    Scheme.SOR: SoRGP,
    Scheme.FITC: FITCGP,
    Scheme.SKI: SkiGP,
}


def make_model(
    scheme: Union[Scheme, str],
    kernel: Kernel,
    sigma2: float,
    mean: Optional[float] = 0.0,
    inducing: Optional[ArrayLike] = None,
    grid: Optional[ProductGrid] = None,
    **options,
) -> GpModel:
    """Create an unfitted GP model.

    Args:
        scheme: "exact", "sor", "fitc" or "ski"
        kernel: Covariance function
        sigma2: Noise variance
        mean: Constant mean (None for the empirical mean)
        inducing: Inducing points for SoR and FITC
        grid: Inducing grid for SKI
        **options: Extra SKI settings (interp, structure, cg, cross_cov, logdet, idw_power)

    Returns:
        Unfitted model

    Raises:
        ValidationError: On an unknown scheme or missing inducing points/grid
    """
    try:
        scheme = Scheme(scheme)
    except ValueError:
        raise ValidationError(
            f"Unknown scheme '{scheme}'; expected one of {[s.value for s in Scheme]}",
            field="scheme",
            value=scheme,
        )
    if scheme is Scheme.EXACT:
        return ExactGP(kernel, sigma2, mean)
    if scheme in (Scheme.SOR, Scheme.FITC):
        return MODEL_CLASSES[scheme](kernel, sigma2, mean, inducing=inducing)
    return SkiGP(kernel, sigma2, mean, grid=grid, **options)
