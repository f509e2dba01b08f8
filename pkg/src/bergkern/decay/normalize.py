"""
Normalized Kernel
=================

The decay estimate reads

    |K(z,w)| exp(-phi(z) - phi(w)) <= C exp(-sigma d_phi(z,w)) / (tau(z) tau(w))

Moving tau(z) tau(w) to the left gives the normalized kernel

    N(z, w) = |K(z,w)| exp(-phi(z) - phi(w)) tau(z) tau(w) <= C exp(-sigma d_phi(z,w))

which is computed here in log form from a KernelValue.
"""

import numpy as np
import numpy.typing as npt

from ..kernel.base import BaseKernel
from ..kernel.models import KernelValue
from ..weights.functions import eval_log_tau, eval_phi
from ..weights.models import WeightSpec


def log_weight_factor(spec: WeightSpec, points: npt.ArrayLike) -> np.ndarray:
    """-phi(z) + log tau(z) for each point."""
    return eval_log_tau(spec, points) - eval_phi(spec, points)


def normalized_kernel(spec: WeightSpec, kv: KernelValue, z: complex, w: complex) -> float:
    """
    log N(z, w) = log|K(z,w)| - phi(z) - phi(w) + log tau(z) + log tau(w).

    Raises:
        DomainError: If z or w is outside the disc
    """
    factors = log_weight_factor(spec, np.array([z, w], dtype=complex))
    return float(kv.log_mag + factors[0] + factors[1])


def evaluate_normalized(kernel: BaseKernel, z: complex, w: complex) -> float:
    """log N(z, w) straight from a kernel."""
    return normalized_kernel(kernel.spec, kernel.evaluate(z, w), z, w)
