"""
Base Kernel Interface
=====================

Every route to K(z, w) (moment series, closed form, Gram matrix, gauge twist) is a
BaseKernel bound to one WeightSpec. Callers ask for values; they do not care how a
route produces them, and each value says which route it came from (KernelValue.method).

Shared behaviour lives here:
    - domain checks on the evaluation points
    - diagonal() and evaluate_many() built on evaluate()
"""

import logging
from abc import ABC, abstractmethod
from typing import Iterable, Sequence

import numpy as np

from ..core.exceptions import DomainError
from ..weights.models import WeightSpec
from .models import KernelMethod, KernelValue

logger = logging.getLogger(__name__)


class BaseKernel(ABC):
    """
    Abstract base class for kernel evaluators.

    Subclasses set METHOD and implement supports() and evaluate(). Construction is where
    the expensive work happens (moment tables, Cholesky factors); evaluate() must be
    cheap and must not mutate the instance, so one kernel can serve many threads.
    """

    METHOD: KernelMethod

    def __init__(self, spec: WeightSpec) -> None:
        self.spec = spec

    @classmethod
    @abstractmethod
    def supports(cls, spec: WeightSpec) -> bool:
        """True if this route can evaluate the kernel of ``spec`` directly."""

    @abstractmethod
    def evaluate(self, z: complex, w: complex) -> KernelValue:
        """
        K(z, w) for this weight.

        Raises:
            DomainError: If z or w is outside the admissible region
            NumericalAccuracyError: If the route cannot reach its tolerance
        """

    def diagonal(self, z: complex) -> KernelValue:
        """K(z, z)."""
        return self.evaluate(z, z)

    def evaluate_many(self, pairs: Iterable[tuple[complex, complex]]) -> list[KernelValue]:
        """Evaluate a sequence of (z, w) pairs in order."""
        return [self.evaluate(z, w) for z, w in pairs]

    def log_diagonal(self, points: Sequence[complex]) -> np.ndarray:
        """log K(z, z) for each point."""
        return np.array([self.diagonal(z).log_mag for z in points], dtype=float)

    @staticmethod
    def _check_point(z: complex, radius: float = 1.0, name: str = "z") -> complex:
        z = complex(z)
        if not (np.isfinite(z.real) and np.isfinite(z.imag)):
            raise DomainError(f"{name} must be finite, got {z}")
        if abs(z) >= radius:
            bound = "the open unit disc" if radius == 1.0 else f"|{name}| < {radius:g}"
            raise DomainError(f"{name} = {z} is outside {bound}")
        return z

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec.describe()})"
