"""
Monomial Moments
================

Builds the MomentTable of a radial weight:

    m_n = ||z^n||^2 = 2 pi integral_0^1 r^(2n+1) exp(-2 phi(r)) dr
        = pi integral_0^1 t^n exp(-2 phi(sqrt t)) dt          (t = r^2)

All N + 1 integrals are computed in one adaptive pass in log space. The log integrand

    n log t - 2 phi(sqrt t)

is evaluated on Gauss-Legendre panels that are graded toward t = 1, where t^n
concentrates for large n and where exp(-2 phi) has its singular behaviour.

Usage:
    from bergkern.kernel.moments import compute_moments

    table = compute_moments(WeightSpec(A=1.0), N=200, tol=1e-10)
    table.moments[:3]   # pi/2, pi/6, pi/12
"""

import logging
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..core.exceptions import ConfigurationError, MethodMismatchError, QuadratureError
from ..weights.models import WeightSpec
from .models import MomentTable
from .quadrature import AdaptivePanelQuadrature, graded_breakpoints

logger = logging.getLogger(__name__)


def radial_log_density(spec: WeightSpec, t: np.ndarray) -> np.ndarray:
    """
    -2 phi as a function of t = |z|^2 for a radial weight (constant shift included).

    Computed from log1p so nodes next to t = 1 keep their precision.
    """
    log_s = np.log1p(-t)
    value = spec.A * log_s
    if spec.B > 0:
        value = value - spec.B * np.exp(-spec.alpha * log_s)
    return value - 2.0 * spec.constant_shift


def compute_moments(
    spec: WeightSpec,
    N: int,
    tol: float = 1e-10,
    order: int = 20,
    max_panels: int = 20000,
) -> MomentTable:
    """
    Compute log m_n for n = 0..N.

    Args:
        spec: Radial weight
        N: Highest degree (>= 0)
        tol: Relative quadrature tolerance per entry
        order: Gauss-Legendre order per panel
        max_panels: Panel budget for the adaptive pass

    Returns:
        MomentTable with rel_err[n] <= tol for every n

    Raises:
        MethodMismatchError: If the weight is not radial
        ConfigurationError: If N < 0 or tol <= 0
        QuadratureError: If the panel budget runs out or monotonicity fails
    """
    if not spec.is_radial:
        raise MethodMismatchError(f"moment series needs a radial weight, got {spec.describe()}")
    if N < 0:
        raise ConfigurationError(f"N must be >= 0, got {N}")
    if not tol > 0:
        raise ConfigurationError(f"tol must be positive, got {tol}")

    degrees = np.arange(N + 1, dtype=float)

    def log_integrand(t: np.ndarray) -> np.ndarray:
        return np.log(t)[:, None] * degrees[None, :] + radial_log_density(spec, t)[:, None]

    # Grade deep enough that the last panel is narrower than the t^N peak width 1/N.
    levels = min(50, int(math.log2(N + 2)) + 10)
    breakpoints = graded_breakpoints(0.0, 1.0, levels=levels, toward="b")

    quad = AdaptivePanelQuadrature(order=order, max_panels=max_panels)
    result = quad.integrate_log(log_integrand, breakpoints, tol)

    log_m = result.log_value + math.log(math.pi)
    if not np.all(np.isfinite(log_m)):
        raise QuadratureError("moment underflow: log m_n is not finite", requested=tol)
    if N > 0 and np.any(np.diff(log_m) >= 0):
        bad = int(np.argmax(np.diff(log_m) >= 0))
        raise QuadratureError(
            f"moments are not strictly decreasing at n={bad}", achieved=float(np.max(result.rel_err)), requested=tol
        )

    rel_err = np.asarray(result.rel_err, dtype=float)
    with np.errstate(under="ignore"):
        quad_err = rel_err * np.exp(log_m)

    logger.info(
        "moment table %s: N=%d, %d panels, max rel err %.3g",
        spec.describe(), N, result.panels, float(np.max(rel_err)),
    )
    return MomentTable(
        log_m=log_m,
        quad_err=quad_err,
        rel_err=rel_err,
        spec_hash=spec.spec_hash,
        N=N,
        tol=tol,
        panels=result.panels,
    )


def moment_cache_path(cache_dir: Union[str, Path], spec: WeightSpec, N: int, tol: float) -> Path:
    """File name of a cached table: moments-<spec_hash>-N<N>-tol<tol>.json."""
    return Path(cache_dir) / f"moments-{spec.spec_hash}-N{N}-tol{tol:g}.json"


def load_or_compute_moments(
    spec: WeightSpec,
    N: int,
    tol: float = 1e-10,
    cache_dir: Optional[Union[str, Path]] = None,
    **quad_options: int,
) -> MomentTable:
    """
    compute_moments with an on-disk JSON cache keyed by (spec hash, N, tol).

    A cached file whose spec hash does not match is ignored and overwritten.
    """
    if cache_dir is None:
        return compute_moments(spec, N, tol, **quad_options)

    path = moment_cache_path(cache_dir, spec, N, tol)
    if path.exists():
        try:
            table = MomentTable.load(path)
            if table.spec_hash == spec.spec_hash and table.N == N:
                logger.debug("moment table loaded from %s", path)
                return table
        except ConfigurationError as e:
            logger.warning("ignoring unreadable moment cache %s: %s", path, e)

    table = compute_moments(spec, N, tol, **quad_options)
    table.save(path)
    logger.debug("moment table cached at %s", path)
    return table
