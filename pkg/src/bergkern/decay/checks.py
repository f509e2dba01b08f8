"""
Decay Diagnostics
=================

near_diagonal_check
    Near the diagonal, |z - w| <= alpha min(tau(z), tau(w)), the kernel is comparable to
    sqrt(K(z,z) K(w,w)) ~ exp(phi(z) + phi(w)) / (tau(z) tau(w)). The check reports the
    extremes of the normalized kernel N and of the coherence |K(z,w)| / sqrt(K(z,z) K(w,w))
    over a seeded sample of such pairs.

mean_value_check
    The sub-mean-value inequality

        |K(w,z)|^2 exp(-2 phi(w)) <~ tau(w)^(-2) integral_{D(w, beta tau(w) / 2)} |K(zeta,z)|^2 exp(-2 phi) dlambda

    returns the left side divided by the right side. For small beta the integral tends to
    the disc area times the centre value, so the ratio tends to 4 / (pi beta^2).

cauchy_schwarz_violations
    |K(z,w)|^2 <= K(z,z) K(w,w) (1 + err) over a sample set.

metric_comparison_violations
    d_phi >= d_h / C2 up to the snap error bar, d_h the hyperbolic distance.
"""

import logging
import math
from typing import Sequence

import numpy as np

from ..core.exceptions import ConfigurationError, DomainError
from ..kernel.base import BaseKernel
from ..kernel.quadrature import gauss_legendre_unit
from ..metric.oracles import hyperbolic_distance
from ..weights.functions import eval_phi, eval_tau
from .models import NearDiagonalReport, SamplePair
from .normalize import normalized_kernel

logger = logging.getLogger(__name__)

NEAR_DIAGONAL_MAX_ALPHA = 0.5
_EPS = np.finfo(float).eps


def near_diagonal_pairs(
    kernel: BaseKernel,
    alpha: float,
    count: int,
    seed: int = 0,
    r_max: float = 0.9,
    diagonal_only: bool = False,
) -> list[tuple[complex, complex]]:
    """
    Seeded pairs with |z|, |w| <= r_max and |z - w| <= alpha min(tau(z), tau(w)).

    z is area-uniform; w = z + rho e^(i psi) with rho uniform in [0, alpha tau(z)]. Candidates
    that break the min(tau) condition or leave r_max are redrawn.
    """
    spec = kernel.spec
    rng = np.random.default_rng(seed)
    pairs: list[tuple[complex, complex]] = []
    attempts = 0
    while len(pairs) < count:
        attempts += 1
        if attempts > 100 * count:
            raise ConfigurationError(f"could not draw {count} near-diagonal pairs inside r_max={r_max:g}")
        z = complex(r_max * math.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))
        if diagonal_only:
            pairs.append((z, z))
            continue
        tau_z = float(eval_tau(spec, z))
        w = z + alpha * tau_z * rng.uniform() * complex(np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))
        if abs(w) > r_max:
            continue
        if abs(z - w) <= alpha * min(tau_z, float(eval_tau(spec, w))):
            pairs.append((z, w))
    return pairs


def near_diagonal_check(
    kernel: BaseKernel,
    alpha: float = 0.25,
    samples: int = 200,
    seed: int = 0,
    r_max: float = 0.9,
    diagonal_only: bool = False,
) -> NearDiagonalReport:
    """
    Extremes of N(z, w) and of the coherence over near-diagonal pairs.

    Args:
        kernel: Kernel of the weight under test
        alpha: Near-diagonal radius factor, 0 < alpha <= 0.5
        samples: Number of pairs
        seed: Sampler seed
        r_max: Cap on |z| and |w|
        diagonal_only: Use w = z (the exact-diagonal case)

    Raises:
        ConfigurationError: alpha outside (0, 0.5] or samples < 1
    """
    if not 0.0 < alpha <= NEAR_DIAGONAL_MAX_ALPHA:
        raise ConfigurationError(f"alpha must lie in (0, {NEAR_DIAGONAL_MAX_ALPHA}], got {alpha}")
    if samples < 1:
        raise ConfigurationError(f"samples must be >= 1, got {samples}")

    spec = kernel.spec
    log_n = []
    log_coherence = []
    for z, w in near_diagonal_pairs(kernel, alpha, samples, seed, r_max, diagonal_only):
        k_zw = kernel.evaluate(z, w)
        log_n.append(normalized_kernel(spec, k_zw, z, w))
        if diagonal_only:
            log_coherence.append(0.0)
        else:
            log_coherence.append(k_zw.log_mag - 0.5 * (kernel.diagonal(z).log_mag + kernel.diagonal(w).log_mag))

    n_values = np.exp(np.array(log_n))
    coherence = np.exp(np.array(log_coherence))
    report = NearDiagonalReport(
        n_min=float(n_values.min()),
        n_max=float(n_values.max()),
        coherence_min=float(coherence.min()),
        coherence_max=float(coherence.max()),
        count=len(log_n),
        alpha=alpha,
    )
    logger.info(
        "near-diagonal %s: N in [%.6g, %.6g], coherence in [%.6g, %.6g] over %d pairs",
        spec.describe(), report.n_min, report.n_max, report.coherence_min, report.coherence_max, report.count,
    )
    return report


def mean_value_check(
    kernel: BaseKernel,
    z: complex,
    w: complex,
    beta: float = 0.5,
    quad_n: int = 24,
    domain_radius: float = 0.99,
) -> float:
    """
    |K(w,z)|^2 exp(-2 phi(w)) / [tau(w)^(-2) integral_{D(w, beta tau(w)/2)} |K(., z)|^2 exp(-2 phi)].

    The disc integral uses quad_n Gauss-Legendre nodes in the radius and quad_n trapezoid
    nodes in the angle, centred at w. Everything is accumulated relative to the centre
    value, so large kernels do not overflow.

    Raises:
        ConfigurationError: beta <= 0 or quad_n < 2
        DomainError: The disc leaves {|zeta| <= domain_radius}
    """
    if not beta > 0:
        raise ConfigurationError(f"beta must be positive, got {beta}")
    if quad_n < 2:
        raise ConfigurationError(f"quad_n must be >= 2, got {quad_n}")

    spec = kernel.spec
    z, w = complex(z), complex(w)
    tau_w = float(eval_tau(spec, w))
    radius = 0.5 * beta * tau_w
    if abs(w) + radius > domain_radius:
        raise DomainError(
            f"disc D(w, {radius:.4g}) around |w|={abs(w):.4g} leaves |zeta| <= {domain_radius:g}"
        )

    center_log = 2.0 * kernel.evaluate(w, z).log_mag - 2.0 * float(eval_phi(spec, w))

    nodes, weights = gauss_legendre_unit(quad_n)
    radii = radius * nodes
    radial_weights = radius * weights * radii
    angles = 2.0 * math.pi * np.arange(quad_n) / quad_n
    grid = w + radii[:, None] * np.exp(1j * angles)[None, :]
    log_density = -2.0 * eval_phi(spec, grid)

    relative = np.empty(grid.shape)
    for i in range(quad_n):
        for j in range(quad_n):
            log_k = kernel.evaluate(grid[i, j], z).log_mag
            relative[i, j] = math.exp(2.0 * log_k + log_density[i, j] - center_log)

    integral = float(np.sum(radial_weights[:, None] * relative)) * (2.0 * math.pi / quad_n)
    return tau_w**2 / integral


def cauchy_schwarz_violations(samples: Sequence[SamplePair], slack: float = 0.0) -> int:
    """
    Pairs with 2 log|K(z,w)| > log K(z,z) + log K(w,w) + log(1 + err + slack).

    err combines the pair's kernel error (counted twice, it enters squared) with the two
    diagonal errors.
    """
    count = 0
    for p in samples:
        err = 2.0 * p.kernel_err + p.diag_err + 8.0 * _EPS + slack
        if 2.0 * p.log_k_zw > p.log_k_zz + p.log_k_ww + math.log1p(err):
            count += 1
    return count


def metric_comparison_violations(samples: Sequence[SamplePair], c2: float) -> int:
    """
    Pairs with d_phi(z, w) < d_h(z, w) / C2 - d_phi_err.

    tau(z) <= C2 (1 - |z|) <= C2 (1 - |z|^2), so the tau-metric dominates the
    hyperbolic metric |dz| / (1 - |z|^2) up to the factor C2.
    """
    if not c2 > 0:
        raise ConfigurationError(f"C2 must be positive, got {c2}")
    count = 0
    for p in samples:
        lower = hyperbolic_distance(p.z, p.w) / c2 - p.d_phi_err
        if p.d_phi < lower * (1.0 - 8.0 * _EPS):
            count += 1
    return count
