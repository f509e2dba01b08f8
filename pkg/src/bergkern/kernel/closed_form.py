"""
Closed-Form Kernel
==================

For the standard weight phi(z) = -(A/2) log(1 - |z|^2) the moments are beta integrals,
m_n = pi B(n + 1, A + 1), and the series sums to

    K(z, w) = (A + 1) / pi * (1 - z conj(w))^(-(A + 2))

The power uses the principal branch. |z conj(w)| < 1 keeps 1 - z conj(w) in the right
half plane, so its argument stays inside (-pi/2, pi/2) and the branch never jumps.
"""

import cmath
import math

import numpy as np

from ..core.exceptions import ConfigurationError, DomainError, MethodMismatchError
from ..weights.models import WeightSpec
from .base import BaseKernel
from .models import KernelValue

_EPS = np.finfo(float).eps


def kernel_closed_form(A: float, z: complex, w: complex) -> KernelValue:
    """
    (A + 1) / pi * (1 - z conj(w))^(-(A + 2)) in log-magnitude + phase form.

    Args:
        A: Weight exponent, A > -1 (A = 0 is the unweighted Bergman kernel)
        z, w: Points of the open unit disc

    Raises:
        ConfigurationError: If A <= -1
        DomainError: If z or w is outside the disc
    """
    if not A > -1:
        raise ConfigurationError(f"closed form needs A > -1, got {A}")
    z = BaseKernel._check_point(z, name="z")
    w = BaseKernel._check_point(w, name="w")

    base = 1.0 - z * w.conjugate()
    if not base.real > 0:
        raise DomainError(f"1 - z conj(w) = {base} left the right half plane")

    exponent = A + 2.0
    log_base = cmath.log(base)
    return KernelValue(
        log_mag=math.log((A + 1.0) / math.pi) - exponent * log_base.real,
        phase=-exponent * log_base.imag,
        method="closed_form",
        err_rel=8.0 * _EPS * (A + 3.0),
        terms=0,
    )


class ClosedFormKernel(BaseKernel):
    """
    Closed-form kernel of phi = -(A/2) log(1 - |z|^2) + c.

    A real constant c rescales the measure by exp(-2c) and the kernel by exp(2c).
    """

    METHOD = "closed_form"

    def __init__(self, spec: WeightSpec) -> None:
        if not self.supports(spec):
            raise MethodMismatchError(
                f"closed form covers B = 0 radial weights only, got {spec.describe()}"
            )
        super().__init__(spec)
        self._log_scale = 2.0 * spec.constant_shift

    @classmethod
    def supports(cls, spec: WeightSpec) -> bool:
        return spec.B == 0 and spec.is_radial

    def evaluate(self, z: complex, w: complex) -> KernelValue:
        kv = kernel_closed_form(self.spec.A, z, w)
        return kv.twisted(self._log_scale, 0.0) if self._log_scale else kv
