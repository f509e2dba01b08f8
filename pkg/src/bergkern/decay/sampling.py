"""
Pair Sampling
=============

Generates (z, w) pairs whose d_phi spans the graph and evaluates every SamplePair field.

Strategies
----------
rays (default)
    13 centres: the origin and radii {0.3, 0.6, 0.8} at 4 seeded angles. From each centre
    4 seeded directions; w marches along each ray at s_k = s_max (k + 1) / n until
    |w| reaches r_max. Pairs are taken round-robin over the rays, so any prefix of the
    list covers every ray, and the first `count` are kept.
random
    z and w uniform (by area) in {|z| <= r_max}.

Pairs sharing a centre share one Dijkstra search (distances_from). Centres are evaluated
on a thread pool; the output order depends only on the seed.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Union

import numpy as np

from ..core.exceptions import BergkernError, ConfigurationError
from ..kernel.base import BaseKernel
from ..kernel.gauge import GaugeTwistedKernel
from ..kernel.models import MomentTable
from ..kernel.series import SeriesKernel
from ..metric.graph import distances_from
from ..metric.models import MetricGraph
from ..metric.oracles import dtau
from ..weights.models import WeightSpec
from .models import SamplePair, SampleSet
from .normalize import normalized_kernel

logger = logging.getLogger(__name__)

CENTER_RADII = (0.3, 0.6, 0.8)
DIRECTIONS_PER_CENTER = 4
STRATEGIES = ("rays", "random")

# keeps the outermost ray point strictly inside r_max after rounding
_EDGE_SHRINK = 1.0 - 1e-9


def ray_centers(r_max: float, rng: np.random.Generator) -> list[complex]:
    """The origin plus radii {0.3, 0.6, 0.8} (those below r_max) at 4 seeded angles."""
    centers = [0j]
    for radius in CENTER_RADII:
        offset = rng.uniform(0.0, 2.0 * math.pi)
        if radius >= r_max:
            continue
        for k in range(4):
            centers.append(radius * complex(math.cos(offset + k * math.pi / 2), math.sin(offset + k * math.pi / 2)))
    return centers


def ray_exit(z: complex, direction: complex, r_max: float) -> float:
    """s > 0 with |z + s direction| = r_max (|direction| = 1, |z| < r_max)."""
    b = (z.conjugate() * direction).real
    return -b + math.sqrt(b * b - abs(z) ** 2 + r_max**2)


def ray_pairs(count: int, r_max: float, seed: int = 0) -> list[tuple[complex, complex]]:
    """Round-robin pairs along the rays of every centre."""
    rng = np.random.default_rng(seed)
    rays = []
    for z in ray_centers(r_max, rng):
        offset = rng.uniform(0.0, 2.0 * math.pi)
        for d in range(DIRECTIONS_PER_CENTER):
            angle = offset + d * 2.0 * math.pi / DIRECTIONS_PER_CENTER
            direction = complex(math.cos(angle), math.sin(angle))
            rays.append((z, direction, ray_exit(z, direction, r_max * _EDGE_SHRINK)))

    per_ray = math.ceil(count / len(rays))
    pairs = []
    for k in range(per_ray):
        for z, direction, s_max in rays:
            pairs.append((z, z + s_max * (k + 1) / per_ray * direction))
    return pairs[:count]


def random_pairs(count: int, r_max: float, seed: int = 0) -> list[tuple[complex, complex]]:
    """Independent area-uniform z and w in {|z| <= r_max}."""
    rng = np.random.default_rng(seed)
    radii = r_max * np.sqrt(rng.uniform(0.0, 1.0, size=(count, 2))) * _EDGE_SHRINK
    angles = rng.uniform(0.0, 2.0 * math.pi, size=(count, 2))
    points = radii * np.exp(1j * angles)
    return [(complex(a), complex(b)) for a, b in points]


def _as_kernel(spec: WeightSpec, kernel: Union[BaseKernel, MomentTable]) -> BaseKernel:
    if isinstance(kernel, BaseKernel):
        return kernel
    if spec.is_radial:
        return SeriesKernel(spec, N=kernel.N, tol=kernel.tol, table=kernel)
    base = spec.without_harmonic()
    return GaugeTwistedKernel(spec, SeriesKernel(base, N=kernel.N, tol=kernel.tol, table=kernel))


def _evaluate_group(
    spec: WeightSpec,
    graph: MetricGraph,
    kernel: BaseKernel,
    z: complex,
    targets: list[complex],
) -> tuple[list[Optional[SamplePair]], list[str]]:
    """All pairs sharing the centre z; failed pairs come back as None with a reason."""
    reasons: list[str] = []
    try:
        estimates = distances_from(graph, spec, z, targets)
        k_zz = kernel.diagonal(z)
    except BergkernError as e:
        return [None] * len(targets), [f"z={z}: {e}"] * len(targets)

    results: list[Optional[SamplePair]] = []
    for w, estimate in zip(targets, estimates):
        try:
            k_zw = kernel.evaluate(z, w)
            k_ww = kernel.diagonal(w)
            results.append(
                SamplePair(
                    z=z,
                    w=w,
                    log_norm_kernel=normalized_kernel(spec, k_zw, z, w),
                    d_phi=estimate.value,
                    d_tau=dtau(spec, z, w),
                    kernel_err=k_zw.err_rel,
                    d_phi_err=estimate.error,
                    log_k_zw=k_zw.log_mag,
                    log_k_zz=k_zz.log_mag,
                    log_k_ww=k_ww.log_mag,
                    diag_err=k_zz.err_rel + k_ww.err_rel,
                )
            )
        except BergkernError as e:
            results.append(None)
            reasons.append(f"z={z}, w={w}: {type(e).__name__}: {e}")
    return results, reasons


def sample_pairs(
    spec: WeightSpec,
    graph: MetricGraph,
    kernel: Union[BaseKernel, MomentTable],
    strategy: str = "rays",
    count: int = 500,
    seed: int = 0,
    threads: int = 1,
) -> SampleSet:
    """
    Generate and evaluate sample pairs.

    Args:
        spec: Weight
        graph: Metric graph of the weight; its r_max bounds every point
        kernel: A kernel of spec, or a MomentTable (evaluated by the series route)
        strategy: "rays" or "random"
        count: Number of pairs to generate (>= 1)
        seed: Seed for centres, directions and random points
        threads: Worker threads over centres

    Returns:
        SampleSet; pairs whose evaluation failed are excluded and counted

    Raises:
        ConfigurationError: Unknown strategy or count < 1
    """
    if count < 1:
        raise ConfigurationError(f"count must be >= 1, got {count}")
    if strategy not in STRATEGIES:
        raise ConfigurationError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    kernel = _as_kernel(spec, kernel)

    generator = ray_pairs if strategy == "rays" else random_pairs
    pairs = generator(count, graph.r_max, seed)

    # group by centre, remembering each pair's position
    groups: dict[complex, list[int]] = {}
    for index, (z, _) in enumerate(pairs):
        groups.setdefault(z, []).append(index)
    jobs = [(z, [pairs[i][1] for i in indices]) for z, indices in groups.items()]

    def run(job: tuple[complex, list[complex]]) -> tuple[list[Optional[SamplePair]], list[str]]:
        z, targets = job
        return _evaluate_group(spec, graph, kernel, z, targets)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, jobs))
    else:
        outcomes = [run(job) for job in jobs]

    slots: list[Optional[SamplePair]] = [None] * len(pairs)
    reasons: list[str] = []
    for (z, _), (results, group_reasons), indices in zip(jobs, outcomes, groups.values()):
        for index, result in zip(indices, results):
            slots[index] = result
        reasons.extend(group_reasons)

    kept = tuple(p for p in slots if p is not None)
    excluded = len(pairs) - len(kept)
    if excluded:
        logger.warning("sample_pairs: %d of %d pairs excluded", excluded, len(pairs))
    logger.info("sampled %d pairs (%s, seed %d) for %s", len(kept), strategy, seed, spec.describe())
    return SampleSet(pairs=kept, excluded=excluded, reasons=tuple(reasons))

