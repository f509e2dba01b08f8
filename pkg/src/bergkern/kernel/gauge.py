"""
Gauge-Twisted Kernel
====================

Multiplication by exp(-g) is an isometry from the space of phi + Re g onto the space
of phi when g is holomorphic:

    integral |f|^2 exp(-2 phi - 2 Re g) = integral |f exp(-g)|^2 exp(-2 phi)

so the kernels are related by

    K_{phi + Re g}(z, w) = exp(g(z)) K_phi(z, w) exp(conj(g(w)))

GaugeTwistedKernel evaluates K_phi with a radial route (series or closed form) and
applies the twist in log form: log|K| gains Re g(z) + Re g(w) and the phase gains
Im g(z) - Im g(w).
"""

from ..core.exceptions import MethodMismatchError
from ..weights.models import WeightSpec
from .base import BaseKernel
from .models import KernelValue


def gauge_factor(spec: WeightSpec, z: complex, w: complex) -> tuple[float, float]:
    """(log-magnitude, phase) of exp(g(z) + conj(g(w)))."""
    gz = complex(spec.g(z))
    gw = complex(spec.g(w))
    return gz.real + gw.real, gz.imag - gw.imag


class GaugeTwistedKernel(BaseKernel):
    """
    Kernel of phi + Re g obtained by twisting the kernel of phi.

    Args:
        spec: Weight with a harmonic perturbation
        base: Kernel of spec.without_harmonic() (any radial route)

    Usage:
        spec = WeightSpec(A=1.0, harmonic_coeffs=(0, 0.3 + 0.2j))
        kernel = GaugeTwistedKernel(spec, ClosedFormKernel(spec.without_harmonic()))
    """

    def __init__(self, spec: WeightSpec, base: BaseKernel) -> None:
        if base.spec != spec.without_harmonic():
            raise MethodMismatchError(
                f"gauge base must be the kernel of {spec.without_harmonic().describe()}, "
                f"got {base.spec.describe()}"
            )
        super().__init__(spec)
        self.base = base
        self.METHOD = base.METHOD

    @classmethod
    def supports(cls, spec: WeightSpec) -> bool:
        return bool(spec.harmonic_coeffs)

    def evaluate(self, z: complex, w: complex) -> KernelValue:
        kv = self.base.evaluate(z, w)
        log_factor, phase_shift = gauge_factor(self.spec, z, w)
        return kv.twisted(log_factor, phase_shift)
