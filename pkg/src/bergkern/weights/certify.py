"""
OP(D) Certification
===================

Empirical estimates for the three conditions on tau:

    Lipschitz  |tau(z) - tau(w)| <= C1 |z - w|
    boundary   tau(z) <= C2 (1 - |z|)
    growth     tau(w) <= tau(z) + C3 |z - w|   whenever |z - w| > a tau(z),  with 0 < C3 < 1

The constants are suprema over the whole disc, so sampling only bounds them from below;
the report carries r_max next to every estimate for that reason. The growth condition is
existential in (C3, a), so it is certified by scanning a grid of a values and accepting
the first one whose sampled C3 stays below 1 - margin.

Sampling
--------
tau varies fastest in the radial direction, so the sampler is a polar grid that is
stratified in s = -log(1 - |z|) (rings bunch up toward r_max) and shares one set of
angles across all rings. Shared angles put radially aligned pairs in the sample, which
is where the Lipschitz ratio of a radial tau peaks.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from ..core.exceptions import ConfigurationError
from .functions import eval_tau
from .models import OPReport, WeightSpec

logger = logging.getLogger(__name__)


def sample_points(n_samples: int, r_max: float, seed: int = 0) -> np.ndarray:
    """
    Stratified radial-angular sample of the disc {|z| <= r_max}.

    The grid has ceil(sqrt(n)) rings and ceil(n / rings) angles, so it holds at least
    n_samples points. The outermost ring sits exactly at r_max.

    Args:
        n_samples: Requested number of points (>= 1)
        r_max: Radius cap in (0, 1)
        seed: Seed for the stratification jitter and the angular offset

    Returns:
        1-D complex array of sample points
    """
    if n_samples < 1:
        raise ConfigurationError(f"n_samples must be >= 1, got {n_samples}")
    if not 0.0 < r_max < 1.0:
        raise ConfigurationError(f"r_max must lie in (0, 1), got {r_max}")

    rng = np.random.default_rng(seed)
    n_rings = math.ceil(math.sqrt(n_samples))
    n_angles = math.ceil(n_samples / n_rings)

    s_max = -math.log1p(-r_max)
    jitter = rng.uniform(0.0, 1.0, size=n_rings)
    s = s_max * (np.arange(n_rings) + jitter) / n_rings
    s[-1] = s_max
    radii = -np.expm1(-s)

    offset = rng.uniform(0.0, 2.0 * math.pi / n_angles)
    angles = offset + 2.0 * math.pi * np.arange(n_angles) / n_angles

    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def check_op_conditions(
    spec: WeightSpec,
    r_max: float = 0.99,
    n_samples: int = 1024,
    a_grid: Sequence[float] = (0.5, 1.0, 2.0, 4.0, 8.0),
    margin: float = 0.01,
    seed: int = 0,
) -> OPReport:
    """
    Estimate C1, C2 and search for a growth witness.

    Pairs with z = w are excluded from every ratio statistic. For the growth condition the row
    point plays the role of z: a pair (z, w) is admissible for a given a when
    |z - w| > a tau(z), and its contribution max(0, tau(w) - tau(z)) / |z - w| is clipped
    at zero because the inequality is vacuous when tau(w) <= tau(z).

    Args:
        spec: Weight to certify
        r_max: Sampling cap on |z|
        n_samples: Requested number of sample points
        a_grid: Candidate values of a, scanned in order
        margin: A witness needs C3 < 1 - margin
        seed: Sampler seed

    Returns:
        OPReport

    Raises:
        ConfigurationError: Empty sample set, bad r_max, empty or non-positive a_grid
    """
    if not a_grid or any(a <= 0 for a in a_grid):
        raise ConfigurationError("a_grid must be a non-empty list of positive numbers")
    if not 0.0 <= margin < 1.0:
        raise ConfigurationError(f"margin must lie in [0, 1), got {margin}")

    points = sample_points(n_samples, r_max, seed)
    if points.size == 0:
        raise ConfigurationError("empty sample set")

    tau = eval_tau(spec, points)
    c2 = float(np.max(tau / (1.0 - np.abs(points))))
    diagnostics: list[str] = []

    if points.size < 2:
        message = "only one sample point: no admissible pair for C1 or C3"
        logger.warning(message)
        diagnostics.append(message)
        return OPReport(
            C1_est=0.0,
            C2_est=c2,
            C3_found=None,
            sample_count=int(points.size),
            r_max=r_max,
            margin=margin,
            a_scan=tuple((float(a), None) for a in a_grid),
            diagnostics=tuple(diagnostics),
        )

    # Full pair matrices; rows are z, columns are w.
    dist = np.abs(points[:, None] - points[None, :])
    dtau = tau[None, :] - tau[:, None]
    distinct = dist > 0

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(distinct, dtau / dist, 0.0)
    c1 = float(np.max(np.abs(ratio)))

    growth = np.clip(ratio, 0.0, None)
    found: Optional[tuple[float, float]] = None
    scan: list[tuple[float, Optional[float]]] = []
    for a in a_grid:
        admissible = distinct & (dist > a * tau[:, None])
        if not admissible.any():
            scan.append((float(a), None))
            diagnostics.append(f"a={a:g}: no admissible pair within r_max={r_max:g}")
            continue
        c3 = float(np.max(growth[admissible]))
        scan.append((float(a), c3))
        logger.debug("growth scan: a=%g C3=%.6g", a, c3)
        if found is None and c3 < 1.0 - margin:
            found = (c3, float(a))

    if found is None:
        logger.warning("no growth witness on a-grid %s for %s", list(a_grid), spec.describe())

    logger.info(
        "OP check %s: C1=%.6g C2=%.6g C3=%s (%d samples, r_max=%g)",
        spec.describe(), c1, c2, found, points.size, r_max,
    )
    return OPReport(
        C1_est=c1,
        C2_est=c2,
        C3_found=found,
        sample_count=int(points.size),
        r_max=r_max,
        margin=margin,
        a_scan=tuple(scan),
        diagnostics=tuple(diagnostics),
    )
