"""
Metric Graph
============

Shortest-path approximation of the distance

    d_phi(z, w) = inf over curves gamma from z to w of  integral |gamma'(t)| / tau(gamma(t)) dt

Grid
----
Rings march outward from the centre with a step proportional to the local tau:

    rho_1 = h,   rho_(i+1) = rho_i + h tau(rho_i) / tau(0)    while rho_(i+1) <= r_max

so consecutive rings sit h / tau(0) apart in the tau-metric. Ring i carries

    n_i = 8 ceil(2 pi rho_i tau(0) / (8 h tau(rho_i)))

equispaced nodes starting at angle 0. The angular step is then at most the radial step
in the tau-metric (cells are close to squares) and at most h in the Euclidean one.
Neither the rings nor their counts depend on r_max: a graph with a larger r_max contains
the smaller one as a subgraph.

Stencil
-------
A node (i, j) is joined to (i, j + 1) and, for every coprime offset (dr, dj) with
1 <= dr <= order and |dj| <= order, to node b + dj of ring i + dr, where b is the node of
that ring nearest in angle. Order 1 is the 8-neighbour stencil and order 2 the
16-neighbour one. A fixed stencil only offers finitely many directions, so its paths
overshoot off-ray distances by a fraction that does not shrink with h; "auto" grows the
order like h^(-1/2), which keeps the overshoot O(h).

tau depends only on |z| (a harmonic perturbation has no Laplacian), so the graph is
invariant under rotation by 2 pi / 8.

Queries
-------
An endpoint snaps to the corners of the polar cell that contains it (at most four nodes,
the node itself when it lies on the grid). The reported distance is the minimum over
corner pairs of  snap(z) + graph path + snap(w), each snap being the Simpson tau-length
of the straight segment to the corner.

Usage:
    graph = build_graph(spec, r_max=0.95, h=0.01)
    d = distance(graph, spec, 0.0, 0.5)
    estimates = distances_from(graph, spec, 0.3, [0.5, 0.6j, -0.2])
"""

import io
import logging
import math
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import numpy.typing as npt
from scipy import sparse
from scipy.sparse import csgraph

from ..core.exceptions import ConfigurationError, DomainError
from ..utils.files import atomic_write_bytes
from ..weights.functions import eval_tau
from ..weights.models import WeightSpec
from .models import DistanceEstimate, MetricGraph

logger = logging.getLogger(__name__)

STENCILS = ("auto", "8", "16")
FIXED_ORDERS = {"8": 1, "16": 2}

# auto order = ceil(AUTO_ORDER_SCALE / sqrt(h)), clipped to [2, MAX_AUTO_ORDER]
AUTO_ORDER_SCALE = 0.4
MAX_AUTO_ORDER = 6


def metric_key(spec: WeightSpec) -> str:
    """Hash of the part of the weight that tau sees."""
    return spec.without_harmonic().spec_hash


def segment_length(spec: WeightSpec, u: npt.ArrayLike, v: npt.ArrayLike) -> np.ndarray:
    """
    Simpson approximation of integral |dz| / tau along the segment [u, v].

        |v - u| (1/tau(u) + 4/tau(mid) + 1/tau(v)) / 6
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    simpson = 1.0 / eval_tau(spec, u) + 4.0 / eval_tau(spec, 0.5 * (u + v)) + 1.0 / eval_tau(spec, v)
    return np.abs(v - u) * simpson / 6.0


def stencil_order(stencil: str, h: float) -> int:
    """Reach of the stencil in ring and angle steps."""
    if stencil in FIXED_ORDERS:
        return FIXED_ORDERS[stencil]
    if stencil != "auto":
        raise ConfigurationError(f"stencil must be one of {list(STENCILS)}, got {stencil!r}")
    order = math.ceil(AUTO_ORDER_SCALE / math.sqrt(h) - 1e-9)
    return min(MAX_AUTO_ORDER, max(2, order))


def stencil_offsets(order: int) -> list[tuple[int, int]]:
    """(0, 1) plus the coprime (dr, dj) with 1 <= dr <= order and |dj| <= order."""
    offsets = [(0, 1)]
    for dr in range(1, order + 1):
        offsets.extend((dr, dj) for dj in range(-order, order + 1) if math.gcd(dr, abs(dj)) == 1)
    return offsets


def ring_radii(spec: WeightSpec, r_max: float, h: float, max_rings: int = 20000) -> np.ndarray:
    """
    tau-proportional ring radii <= r_max.

    Raises:
        ConfigurationError: No ring fits (h > r_max) or more than max_rings are needed
    """
    tau0 = float(eval_tau(spec, 0.0))
    radii = []
    rho = h
    while rho <= r_max:
        radii.append(rho)
        if len(radii) > max_rings:
            raise ConfigurationError(f"metric graph needs more than {max_rings} rings; increase h")
        rho = rho + h * float(eval_tau(spec, rho)) / tau0
    if not radii:
        raise ConfigurationError(f"h = {h:g} exceeds r_max = {r_max:g}: the graph has no ring")
    return np.array(radii)


def ring_node_counts(spec: WeightSpec, radii: np.ndarray, h: float) -> np.ndarray:
    """Nodes per ring: the smallest multiple of 8 whose angular tau-step is <= h / tau(0)."""
    tau0 = float(eval_tau(spec, 0.0))
    target = 2.0 * math.pi * radii * tau0 / (h * eval_tau(spec, radii))
    return 8 * np.maximum(1, np.ceil(target / 8.0)).astype(np.int64)


def build_graph(
    spec: WeightSpec,
    r_max: float,
    h: float,
    stencil: str = "auto",
    max_rings: int = 20000,
) -> MetricGraph:
    """
    Build the polar metric graph of {|z| <= r_max}.

    Args:
        spec: Weight (only its radial part matters)
        r_max: Radius in (0, 1)
        h: Target Euclidean edge length
        stencil: "auto" (order grows as h shrinks), "8" or "16"
        max_rings: Ring budget

    Raises:
        ConfigurationError: Bad parameters or a disconnected graph
    """
    if not 0.0 < r_max < 1.0:
        raise ConfigurationError(f"r_max must lie in (0, 1), got {r_max}")
    if not h > 0:
        raise ConfigurationError(f"h must be positive, got {h}")
    order = stencil_order(stencil, h)

    radii = ring_radii(spec, r_max, h, max_rings)
    counts = ring_node_counts(spec, radii, h)
    n_rings = radii.size
    offsets = 1 + np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.int64)

    ring_of = np.repeat(np.arange(n_rings), counts)
    angle_of = np.arange(ring_of.size) - np.repeat(offsets - 1, counts)
    theta = 2.0 * math.pi * angle_of / counts[ring_of]
    nodes = np.concatenate([[0j], radii[ring_of] * np.exp(1j * theta)])

    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    weights: list[np.ndarray] = []

    def add_edges(src: np.ndarray, dst: np.ndarray) -> None:
        rows.append(src)
        cols.append(dst)
        weights.append(segment_length(spec, nodes[src], nodes[dst]))

    # centre to every node of ring 1
    add_edges(np.zeros(counts[0], dtype=np.int64), offsets[0] + np.arange(counts[0]))

    for dr, dj in stencil_offsets(order):
        if dr == 0:
            add_edges(offsets[ring_of] + angle_of, offsets[ring_of] + (angle_of + dj) % counts[ring_of])
            continue
        inner = ring_of + dr < n_rings
        ring, j = ring_of[inner], angle_of[inner]
        n, n_out = counts[ring], counts[ring + dr]
        # offsets wider than an eighth of the outer ring would wrap onto each other
        keep = 8 * abs(dj) <= n_out
        ring, j, n, n_out = ring[keep], j[keep], n[keep], n_out[keep]
        nearest = (2 * j * n_out + n) // (2 * n)
        add_edges(offsets[ring] + j, offsets[ring + dr] + (nearest + dj) % n_out)

    row = np.concatenate(rows)
    col = np.concatenate(cols)
    data = np.concatenate(weights)
    if not (np.all(np.isfinite(data)) and np.all(data > 0)):
        raise ConfigurationError("metric graph produced a non-positive or non-finite edge weight")

    size = nodes.size
    adjacency = sparse.coo_matrix(
        (np.concatenate([data, data]), (np.concatenate([row, col]), np.concatenate([col, row]))),
        shape=(size, size),
    ).tocsr()

    n_components, _ = csgraph.connected_components(adjacency, directed=False)
    if n_components != 1:
        raise ConfigurationError(f"metric graph has {n_components} components; decrease h")

    graph = MetricGraph(
        nodes=nodes,
        adjacency=adjacency,
        ring_radii=radii,
        ring_counts=counts,
        r_max=float(r_max),
        h=float(h),
        spec_hash=metric_key(spec),
        stencil=stencil,
        order=order,
    )
    logger.info(
        "metric graph %s: r_max=%g h=%g order=%d, %d rings (up to %d nodes), %d nodes, %d edges",
        spec.describe(), r_max, h, order, n_rings, int(counts.max()), graph.node_count, graph.edge_count,
    )
    return graph


# =============================================================================
# Queries
# =============================================================================
def _check_graph(graph: MetricGraph, spec: WeightSpec) -> None:
    if graph.spec_hash != metric_key(spec):
        raise ConfigurationError("metric graph was built for a different weight")


def _ring_corners(graph: MetricGraph, ring: int, angle: float) -> list[int]:
    j = int(angle // graph.angle_step(ring))
    return [graph.node_index(ring, j), graph.node_index(ring, j + 1)]


def _snap(graph: MetricGraph, spec: WeightSpec, z: complex) -> tuple[np.ndarray, np.ndarray]:
    """Corner nodes of the polar cell containing z and the snap length to each."""
    z = complex(z)
    radius = abs(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)) or radius > graph.r_max:
        raise DomainError(f"|z| = {radius:.6g} is outside the metric graph (r_max = {graph.r_max:g})")

    ring = int(np.searchsorted(graph.ring_radii, radius, side="right"))
    angle = math.atan2(z.imag, z.real) % (2.0 * math.pi)

    if ring == 0:
        candidates = [0] + _ring_corners(graph, 1, angle)
    elif ring == graph.ring_count:
        candidates = _ring_corners(graph, ring, angle)
    else:
        candidates = _ring_corners(graph, ring, angle) + _ring_corners(graph, ring + 1, angle)

    indices = np.array(candidates, dtype=np.int64)
    lengths = np.asarray(segment_length(spec, np.full(indices.size, z), graph.nodes[indices]), dtype=float)
    return indices, lengths


def _combine(
    source_lengths: np.ndarray,
    table: np.ndarray,
    target_idx: np.ndarray,
    target_lengths: np.ndarray,
) -> DistanceEstimate:
    totals = source_lengths[:, None] + table[:, target_idx] + target_lengths[None, :]
    a, b = np.unravel_index(int(np.argmin(totals)), totals.shape)
    snap = float(source_lengths[a] + target_lengths[b])
    return DistanceEstimate(value=float(totals[a, b]), error=snap, snap_correction=snap)


def distance_estimate(graph: MetricGraph, spec: WeightSpec, z: complex, w: complex) -> DistanceEstimate:
    """
    Graph distance between z and w with its snap error bar.

    The endpoints are ordered canonically by (Re, Im) before the search, so the result is
    exactly symmetric. Identical endpoints give exactly 0.

    Raises:
        DomainError: If |z| or |w| exceeds graph.r_max
        ConfigurationError: If the graph belongs to another weight
    """
    _check_graph(graph, spec)
    z, w = complex(z), complex(w)
    if z == w:
        _snap(graph, spec, z)
        return DistanceEstimate(0.0, 0.0, 0.0)
    if (w.real, w.imag) < (z.real, z.imag):
        z, w = w, z

    src_idx, src_len = _snap(graph, spec, z)
    dst_idx, dst_len = _snap(graph, spec, w)
    table = csgraph.dijkstra(graph.adjacency, directed=True, indices=src_idx)
    return _combine(src_len, table, dst_idx, dst_len)


def distance(graph: MetricGraph, spec: WeightSpec, z: complex, w: complex) -> float:
    """Approximate d_phi(z, w); see distance_estimate."""
    return distance_estimate(graph, spec, z, w).value


def distances_from(
    graph: MetricGraph,
    spec: WeightSpec,
    z: complex,
    targets: Sequence[complex],
) -> list[DistanceEstimate]:
    """
    Distances from one source to many targets with a single Dijkstra pass.

    Values agree with distance_estimate up to rounding in the path sums.
    """
    _check_graph(graph, spec)
    z = complex(z)
    src_idx, src_len = _snap(graph, spec, z)
    table = csgraph.dijkstra(graph.adjacency, directed=True, indices=src_idx)
    logger.debug("dijkstra from %s: %d sources, %d targets", z, src_idx.size, len(targets))

    results = []
    for w in targets:
        w = complex(w)
        if w == z:
            results.append(DistanceEstimate(0.0, 0.0, 0.0))
            continue
        dst_idx, dst_len = _snap(graph, spec, w)
        results.append(_combine(src_len, table, dst_idx, dst_len))
    return results


def local_metric_ratio(
    graph: MetricGraph,
    spec: WeightSpec,
    z: complex,
    radius_factor: float = 0.5,
    n_points: int = 16,
) -> float:
    """
    max of d_phi(z, zeta) tau(z) / |zeta - z| over the circle |zeta - z| = radius_factor tau(z).

    d_phi is comparable to the Euclidean distance scaled by 1/tau(z) on such discs; the
    ratio is the empirical comparability constant.

    Raises:
        DomainError: If the circle leaves the graph
    """
    if not radius_factor > 0:
        raise ConfigurationError(f"radius_factor must be positive, got {radius_factor}")
    z = complex(z)
    tau_z = float(eval_tau(spec, z))
    radius = radius_factor * tau_z
    circle = z + radius * np.exp(2j * math.pi * np.arange(n_points) / n_points)
    estimates = distances_from(graph, spec, z, circle)
    return max(e.value for e in estimates) / radius_factor


# =============================================================================
# Persistence
# =============================================================================
def graph_cache_path(
    cache_dir: Union[str, Path], spec: WeightSpec, h: float, r_max: float, stencil: str = "auto"
) -> Path:
    """graph-<hash>-h<h>-r<r_max>[-s<stencil>].npz under cache_dir."""
    suffix = "" if stencil == "auto" else f"-s{stencil}"
    return Path(cache_dir) / f"graph-{metric_key(spec)}-h{h:g}-r{r_max:g}{suffix}.npz"


def save_graph(graph: MetricGraph, path: Union[str, Path]) -> Path:
    """Write the graph as .npz (node arrays + CSR adjacency), atomically."""
    adjacency = graph.adjacency
    buffer = io.BytesIO()
    np.savez_compressed(
        buffer,
        nodes=graph.nodes,
        ring_radii=graph.ring_radii,
        ring_counts=graph.ring_counts,
        data=adjacency.data,
        indices=adjacency.indices,
        indptr=adjacency.indptr,
        meta=np.array([graph.r_max, graph.h], dtype=float),
        spec_hash=np.array(graph.spec_hash),
        stencil=np.array(graph.stencil),
    )
    return atomic_write_bytes(path, buffer.getvalue())


def load_graph(path: Union[str, Path]) -> MetricGraph:
    """Read a graph written by save_graph."""
    try:
        with np.load(path, allow_pickle=False) as archive:
            nodes = archive["nodes"]
            r_max, h = archive["meta"]
            stencil = str(archive["stencil"])
            adjacency = sparse.csr_matrix(
                (archive["data"], archive["indices"], archive["indptr"]),
                shape=(nodes.size, nodes.size),
            )
            return MetricGraph(
                nodes=nodes,
                adjacency=adjacency,
                ring_radii=archive["ring_radii"],
                ring_counts=archive["ring_counts"],
                r_max=float(r_max),
                h=float(h),
                spec_hash=str(archive["spec_hash"]),
                stencil=stencil,
                order=stencil_order(stencil, float(h)),
            )
    except (OSError, KeyError, ValueError) as e:
        raise ConfigurationError(f"cannot read metric graph {path}: {e}") from e


def load_or_build_graph(
    spec: WeightSpec,
    r_max: float,
    h: float,
    stencil: str = "auto",
    max_rings: int = 20000,
    cache_dir: Optional[Union[str, Path]] = None,
) -> MetricGraph:
    """build_graph behind an .npz cache keyed by (radial spec hash, h, r_max, stencil)."""
    if cache_dir is None:
        return build_graph(spec, r_max, h, stencil, max_rings)
    path = graph_cache_path(cache_dir, spec, h, r_max, stencil)
    if path.exists():
        try:
            graph = load_graph(path)
            if graph.spec_hash == metric_key(spec):
                logger.debug("metric graph loaded from %s", path)
                return graph
        except ConfigurationError as e:
            logger.warning("ignoring unreadable graph cache %s: %s", path, e)
    graph = build_graph(spec, r_max, h, stencil, max_rings)
    save_graph(graph, path)
    return graph
