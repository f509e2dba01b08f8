"""
Kernel Factory
==============

Selects and builds the kernel route for a weight.

    - "series":       moment series (radial weights; gauge-twisted otherwise)
    - "closed_form":  (A + 1)/pi (1 - z conj w)^-(A+2) (B = 0; gauge-twisted for g != 0)
    - "gram":         Gram matrix of 1..z^N (any weight, |z|, |w| <= r_quad)
    - "auto":         closed_form when it applies, else series

Route parameters default to Settings; keyword overrides win.

Usage:
    from bergkern.kernel.factory import KernelFactory

    kernel = KernelFactory.create(spec, "series", N=500)
    kv = kernel.evaluate(0.2, 0.4j)
"""

import logging
from typing import Any, Optional

from ..core.config import Settings, get_settings
from ..core.exceptions import ConfigurationError, MethodMismatchError
from ..weights.models import WeightSpec
from .base import BaseKernel
from .closed_form import ClosedFormKernel
from .gauge import GaugeTwistedKernel
from .gram import GramKernel
from .series import SeriesKernel

logger = logging.getLogger(__name__)

# =============================================================================
# KERNEL REGISTRY
# =============================================================================
KERNEL_REGISTRY: dict[str, type[BaseKernel]] = {
    "series": SeriesKernel,
    "closed_form": ClosedFormKernel,
    "gram": GramKernel,
}

METHOD_ALIASES = {"closed": "closed_form", "closed-form": "closed_form"}


class KernelFactory:
    """Builds BaseKernel instances by method tag."""

    @staticmethod
    def normalize_method(method: str) -> str:
        name = METHOD_ALIASES.get(method.lower(), method.lower())
        if name != "auto" and name not in KERNEL_REGISTRY:
            raise ConfigurationError(
                f"unknown kernel method '{method}'. Supported: {KernelFactory.get_supported_methods()}"
            )
        return name

    @staticmethod
    def get_supported_methods() -> list[str]:
        return ["auto", *KERNEL_REGISTRY]

    @staticmethod
    def resolve_auto(spec: WeightSpec) -> str:
        """closed_form for B = 0, series otherwise."""
        return "closed_form" if spec.B == 0 else "series"

    @staticmethod
    def options_from_settings(method: str, settings: Settings) -> dict[str, Any]:
        """Constructor keywords for a route, taken from Settings."""
        if method == "series":
            return {
                "N": settings.moment_terms,
                "tol": settings.moment_tol,
                "ratio_window": settings.series_ratio_window,
                "divergence_margin": settings.series_divergence_margin,
                "order": settings.quad_order,
                "max_panels": settings.quad_max_panels,
            }
        if method == "gram":
            return {
                "N": settings.gram_terms,
                "r_quad": settings.gram_r_quad,
                "quad_tol": settings.gram_quad_tol,
                "condition_limit": settings.gram_condition_limit,
                "max_terms": settings.gram_max_terms,
                "order": settings.quad_order,
                "max_panels": settings.quad_max_panels,
            }
        return {}

    @staticmethod
    def create(
        spec: WeightSpec,
        method: str = "auto",
        settings: Optional[Settings] = None,
        **overrides: Any,
    ) -> BaseKernel:
        """
        Build the kernel of ``spec`` by the named route.

        Radial routes are wrapped in GaugeTwistedKernel when the weight carries a
        harmonic perturbation.

        Raises:
            ConfigurationError: Unknown method
            MethodMismatchError: closed_form requested for B > 0
        """
        settings = settings or get_settings()
        name = KernelFactory.normalize_method(method)
        if name == "auto":
            name = KernelFactory.resolve_auto(spec)

        options = KernelFactory.options_from_settings(name, settings)
        options.update(overrides)
        kernel_class = KERNEL_REGISTRY[name]

        if name == "gram" or kernel_class.supports(spec):
            kernel = kernel_class(spec, **options)
        else:
            base_spec = spec.without_harmonic()
            if not kernel_class.supports(base_spec):
                raise MethodMismatchError(f"{name} kernel does not apply to {spec.describe()}")
            kernel = GaugeTwistedKernel(spec, kernel_class(base_spec, **options))

        logger.debug("kernel route %s for %s", kernel, spec.describe())
        return kernel
