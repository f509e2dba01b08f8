"""
Distance Oracles
================

Independent distances the graph is checked against.

    radial_distance_oracle   d_phi(0, r) = integral_0^r dt / tau(t); geodesics through the
                             origin of a rotation-invariant metric are rays
    hyperbolic_distance      distance of |dz| / (1 - |z|^2), arctanh |(z - w)/(1 - conj(z) w)|
    dtau                     |z - w| / min(tau(z), tau(w))

The hyperbolic distance uses the |dz| / (1 - |z|^2) normalization (half the curvature -1
convention). Comparisons with d_phi hold up to this constant.
"""

import numpy as np
from scipy import integrate

from ..core.exceptions import DomainError
from ..weights.functions import eval_tau
from ..weights.models import WeightSpec


def _check_disc(*points: complex) -> None:
    for p in points:
        if not abs(complex(p)) < 1.0:
            raise DomainError(f"|z| = {abs(complex(p)):.6g} is outside the open unit disc")


def radial_distance_oracle(spec: WeightSpec, r: float, tol: float = 1e-12) -> float:
    """
    integral_0^r dt / tau(t) by adaptive quadrature.

    tau ignores the harmonic part of the weight, so any spec is accepted.

    Raises:
        DomainError: If r < 0 or r >= 1
    """
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0, 1), got {r}")
    if r == 0.0:
        return 0.0
    value, _ = integrate.quad(
        lambda t: 1.0 / float(eval_tau(spec, t)), 0.0, r, epsabs=0.0, epsrel=tol, limit=200
    )
    return float(value)


def hyperbolic_distance(z: complex, w: complex) -> float:
    """arctanh |(z - w) / (1 - conj(z) w)|."""
    _check_disc(z, w)
    z, w = complex(z), complex(w)
    if z == w:
        return 0.0
    ratio = abs((z - w) / (1.0 - z.conjugate() * w))
    return float(np.arctanh(min(ratio, 1.0 - 1e-16)))


def dtau(spec: WeightSpec, z: complex, w: complex) -> float:
    """|z - w| / min(tau(z), tau(w))."""
    z, w = complex(z), complex(w)
    tau = eval_tau(spec, np.array([z, w]))
    return abs(z - w) / float(np.min(tau))

