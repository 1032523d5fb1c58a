"""
Kernel registry for building covariance functions by family name.

Config files and model manifests name kernel families as plain strings;
the registry maps those names to kernel classes and builds instances from
(name, value) hyperparameter pairs.
"""

from typing import Callable, Dict, List, Optional, Sequence, Tuple

from loguru import logger

from ..core.exceptions import ValidationError
from .base import Kernel
from .product import ProductKernel
from .rbf import RBFKernel
from .spectral_mixture import SpectralMixtureKernel

KernelBuilder = Callable[[Sequence[Tuple[str, float]], int], Kernel]


class KernelRegistry:
    """
    Central registry of kernel families.

    Each family registers a builder taking (pairs, input_dim). The product
    family is handled specially since it nests per-dimension factor specs.
    """

    def __init__(self):
        """Initialize an empty registry."""
        self._builders: Dict[str, KernelBuilder] = {}

    def register(self, family: str, builder: KernelBuilder) -> None:
        """
        Register a builder for a kernel family.

        Args:
            family: Family name used in configs and manifests (e.g. "rbf")
            builder: Callable building a kernel from (pairs, input_dim)
        """
        if family in self._builders:
            logger.warning(f"Overriding existing builder for kernel family: {family}")
        self._builders[family] = builder
        logger.debug(f"Registered builder for kernel family: {family}")

    def unregister(self, family: str) -> bool:
        """
        Remove a family.

        Returns:
            True if the family was registered
        """
        return self._builders.pop(family, None) is not None

    def has_family(self, family: str) -> bool:
        """Check whether a family is registered."""
        return family in self._builders

    def get_registered_families(self) -> List[str]:
        """Names of all registered families."""
        return list(self._builders)

    def build(
        self,
        family: str,
        pairs: Sequence[Tuple[str, float]] = (),
        input_dim: int = 1,
        factors: Optional[Sequence[Tuple[str, Sequence[Tuple[str, float]]]]] = None,
    ) -> Kernel:
        """
        Build a kernel from its family name and hyperparameter pairs.

        Args:
            family: Registered family name, or "product"
            pairs: (name, natural value) pairs for non-product families
            input_dim: Input dimension D for non-product families
            factors: For "product", a (family, pairs) spec per dimension

        Returns:
            The constructed kernel

        Raises:
            ValidationError: If the family is unknown or its arguments are incomplete
        """
        if family == ProductKernel.family:
            if not factors:
                raise ValidationError("Product kernel needs factor specs", field="factors")
            return ProductKernel([self.build(f, p, 1) for f, p in factors])

        builder = self._builders.get(family)
        if builder is None:
            raise ValidationError(
                f"Unknown kernel family '{family}'; registered: {sorted(self._builders)}",
                field="family",
                value=family,
            )
        try:
            return builder(pairs, input_dim)
        except KeyError as e:
            raise ValidationError(
                f"Missing hyperparameter {e} for kernel family '{family}'",
                field="pairs",
                value=family,
            ) from e

    def describe(self, kernel: Kernel) -> Tuple[str, list, int, Optional[list]]:
        """Inverse of :meth:`build`: (family, pairs, input_dim, factor specs)."""
        if isinstance(kernel, ProductKernel):
            specs = [(f.family, f.to_pairs()) for f in kernel.factors()]
            return kernel.family, [], kernel.input_dim, specs
        return kernel.family, kernel.to_pairs(), kernel.input_dim, None


def _default_registry() -> KernelRegistry:
    reg = KernelRegistry()
    reg.register(RBFKernel.family, RBFKernel.from_pairs)
    reg.register(SpectralMixtureKernel.family, SpectralMixtureKernel.from_pairs)
    return reg


# Shared registry used by the config loader and the model manifest
registry = _default_registry()
