"""
Kernel Property Checks
======================

Structural properties every reproducing kernel must have, computed from any
BaseKernel:

    - Hermitian symmetry      K(z, w) = conj K(w, z)
    - positive semidefiniteness of [K(z_i, z_j)]
    - reproducing property    integral f(zeta) conj K(zeta, z) exp(-2 phi) dlambda = f(z)

These are the checks the oracle suite and the tests run against each route.
"""

import cmath
import math
from typing import Sequence

import numpy as np

from ..core.exceptions import ConfigurationError
from ..weights.functions import eval_phi
from .base import BaseKernel
from .quadrature import gauss_legendre_unit, graded_breakpoints


def hermitian_defect(kernel: BaseKernel, z: complex, w: complex) -> float:
    """|K(z, w) - conj K(w, z)| / |K(z, w)|."""
    kzw = kernel.evaluate(z, w)
    kwz = kernel.evaluate(w, z)
    ratio = cmath.exp(complex(kwz.log_mag - kzw.log_mag, -(kwz.phase + kzw.phase)))
    return abs(ratio - 1.0)


def kernel_matrix(kernel: BaseKernel, points: Sequence[complex], normalized: bool = False) -> np.ndarray:
    """
    [K(z_i, z_j)] for a point set.

    With normalized=True the entries are K(z_i, z_j) / sqrt(K(z_i, z_i) K(z_j, z_j)),
    computed in log form so large diagonals do not overflow. Scaling by a positive
    diagonal keeps the matrix PSD iff the raw matrix is.
    """
    size = len(points)
    log_mag = np.empty((size, size))
    phase = np.empty((size, size))
    for i, z in enumerate(points):
        for j, w in enumerate(points):
            kv = kernel.evaluate(z, w)
            log_mag[i, j] = kv.log_mag
            phase[i, j] = kv.phase
    if normalized:
        half_diag = 0.5 * np.diag(log_mag)
        log_mag = log_mag - half_diag[:, None] - half_diag[None, :]
    return np.exp(log_mag + 1j * phase)


def min_eigenvalue_ratio(matrix: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part divided by the trace."""
    hermitian = 0.5 * (matrix + matrix.conj().T)
    eigenvalues = np.linalg.eigvalsh(hermitian)
    trace = float(np.trace(hermitian).real)
    return float(eigenvalues[0] / trace)


def reproducing_check(
    kernel: BaseKernel,
    z: complex,
    p: int,
    r_quad: float = 0.9999,
    n_angles: int = 64,
    order: int = 20,
    levels: int = 8,
) -> float:
    """
    Relative error of the reproducing identity for f(zeta) = zeta^p.

    The integral over |zeta| <= r_quad uses Gauss-Legendre panels in r (graded toward
    r_quad) and the trapezoid rule in the angle.

    Returns:
        |integral - z^p| / max(|z^p|, tiny)
    """
    if p < 0:
        raise ConfigurationError(f"p must be >= 0, got {p}")
    if not 0.0 < r_quad < 1.0:
        raise ConfigurationError(f"r_quad must lie in (0, 1), got {r_quad}")

    nodes, weights = gauss_legendre_unit(order)
    edges = graded_breakpoints(0.0, r_quad, levels=levels)
    widths = np.diff(edges)
    radii = (edges[:-1, None] + widths[:, None] * nodes[None, :]).ravel()
    radial_weights = (widths[:, None] * weights[None, :]).ravel()
    angles = 2.0 * math.pi * np.arange(n_angles) / n_angles

    total = 0j
    for r, wr in zip(radii, radial_weights):
        ring = r * np.exp(1j * angles)
        log_density = -2.0 * eval_phi(kernel.spec, ring)
        ring_sum = 0j
        for zeta, log_d in zip(ring, log_density):
            # conj K(zeta, z) = K(z, zeta)
            kv = kernel.evaluate(z, zeta)
            ring_sum += zeta**p * cmath.exp(complex(kv.log_mag + log_d, kv.phase))
        total += wr * r * ring_sum * (2.0 * math.pi / n_angles)

    target = complex(z) ** p
    return abs(total - target) / max(abs(target), 1e-300)
