"""
Weight Evaluation
=================

Closed-form phi, Laplacian and tau for a WeightSpec.

All functions accept a scalar or an array of complex points and return an array of the
same shape (a 0-d array for scalar input; use float() on it when a Python float is
needed).

The Laplacian
-------------
For a radial function f(t) of t = |z|^2 the Laplacian is 4 (f'(t) + t f''(t)). That gives

    Delta phi = 2A / (1 - t)^2  +  2 B alpha (1 + alpha t) / (1 - t)^(alpha + 2)

and the harmonic part Re g contributes nothing. ``fd_laplacian`` is the five-point
finite-difference oracle these closed forms are checked against.
"""

import numpy as np
import numpy.typing as npt

from ..core.exceptions import DomainError, InvalidSpecError
from .models import WeightSpec


def _as_points(z: npt.ArrayLike) -> np.ndarray:
    """Convert to a complex array and enforce |z| < 1."""
    points = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(points)):
        raise DomainError("points must be finite")
    if np.any(np.abs(points) >= 1.0):
        raise DomainError(f"points must lie in the open unit disc, max |z| = {np.max(np.abs(points)):.6g}")
    return points


def eval_phi(spec: WeightSpec, z: npt.ArrayLike) -> np.ndarray:
    """
    Evaluate phi(z).

    Args:
        spec: Weight specification
        z: Point or array of points with |z| < 1

    Returns:
        phi(z) as a float array

    Raises:
        DomainError: If any |z| >= 1
    """
    points = _as_points(z)
    s = 1.0 - np.abs(points) ** 2
    value = -spec.A * np.log(s)
    if spec.B > 0:
        value = value + spec.B * s ** (-spec.alpha)
    value = 0.5 * value
    if spec.harmonic_coeffs:
        value = value + np.real(spec.g(points))
    return value


def eval_laplacian(spec: WeightSpec, z: npt.ArrayLike) -> np.ndarray:
    """
    Evaluate Delta phi(z) from the closed form.

    Raises:
        InvalidSpecError: If A = B = 0 (cannot happen for a constructed WeightSpec)
        DomainError: If any |z| >= 1
    """
    if spec.A == 0 and spec.B == 0:
        raise InvalidSpecError("Laplacian vanishes identically for A = B = 0")
    points = _as_points(z)
    t = np.abs(points) ** 2
    s = 1.0 - t
    value = 2.0 * spec.A / s**2
    if spec.B > 0:
        value = value + 2.0 * spec.B * spec.alpha * (1.0 + spec.alpha * t) / s ** (spec.alpha + 2.0)
    return value


def eval_tau(spec: WeightSpec, z: npt.ArrayLike) -> np.ndarray:
    """
    Evaluate tau(z) = (Delta phi(z))^(-1/2).

    For B = 0 this is exactly (1 - |z|^2) / sqrt(2A).
    """
    return 1.0 / np.sqrt(eval_laplacian(spec, z))


def eval_log_tau(spec: WeightSpec, z: npt.ArrayLike) -> np.ndarray:
    """log tau(z), computed without forming tau."""
    return -0.5 * np.log(eval_laplacian(spec, z))


def fd_laplacian(spec: WeightSpec, z: npt.ArrayLike, step: float = 1e-4) -> np.ndarray:
    """
    Five-point finite-difference Laplacian of phi.

    (phi(z+h) + phi(z-h) + phi(z+ih) + phi(z-ih) - 4 phi(z)) / h^2

    Raises:
        DomainError: If a stencil point leaves the disc
    """
    points = _as_points(z)
    center = eval_phi(spec, points)
    total = (
        eval_phi(spec, points + step)
        + eval_phi(spec, points - step)
        + eval_phi(spec, points + 1j * step)
        + eval_phi(spec, points - 1j * step)
        - 4.0 * center
    )
    return total / step**2
