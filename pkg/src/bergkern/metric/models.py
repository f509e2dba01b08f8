"""
Metric Data Models
==================

MetricGraph is a polar grid on {|z| <= r_max}:

    node 0                          the centre
    node ring_offsets[i-1] + j      ring i (i = 1..R) at angle 2 pi j / ring_counts[i-1]

Ring i carries its own node count, a multiple of 8, so the graph is invariant under
rotation by a quarter of a right angle whatever the counts are. Edges join ring
neighbours and, for every stencil offset (dr, dj), a node to the node dj steps away from
its nearest-angle partner dr rings further out. The centre joins every node of ring 1.
An edge weighs the Simpson approximation of integral |dz| / tau along its segment.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import sparse


@dataclass(frozen=True)
class MetricGraph:
    """
    Discretized sub-disc for shortest-path distances.

    Attributes:
        nodes: Complex node positions, index 0 is the centre
        adjacency: Symmetric CSR matrix of edge weights
        ring_radii: Radii of rings 1..R, strictly increasing, all <= r_max
        ring_counts: Nodes on rings 1..R, each a multiple of 8
        r_max: Radius of the discretized sub-disc
        h: Target Euclidean edge length
        spec_hash: Hash of the weight's radial part (tau ignores the harmonic term)
        stencil: "auto", "8" or "16"
        order: Reach of the stencil in ring and angle steps
    """

    nodes: np.ndarray
    adjacency: sparse.csr_matrix
    ring_radii: np.ndarray
    ring_counts: np.ndarray
    r_max: float
    h: float
    spec_hash: str
    stencil: str = "auto"
    order: int = 1

    @property
    def node_count(self) -> int:
        return int(self.nodes.size)

    @property
    def ring_count(self) -> int:
        return int(self.ring_radii.size)

    @property
    def edge_count(self) -> int:
        """Number of undirected edges."""
        return int(self.adjacency.nnz // 2)

    @property
    def ring_offsets(self) -> np.ndarray:
        """Index of node (i, 0) for rings 1..R."""
        return 1 + np.concatenate([[0], np.cumsum(self.ring_counts)[:-1]]).astype(np.int64)

    @property
    def symmetry(self) -> int:
        """Order of the rotation group the node set is invariant under."""
        return int(np.gcd.reduce(self.ring_counts.astype(np.int64)))

    def angle_step(self, ring: int) -> float:
        """Angular spacing of ring `ring` (1-based)."""
        return 2.0 * np.pi / int(self.ring_counts[ring - 1])

    def node_index(self, ring: int, angle: int) -> int:
        """Index of node (ring, angle); ring 0 is the centre."""
        if ring == 0:
            return 0
        count = int(self.ring_counts[ring - 1])
        return int(self.ring_offsets[ring - 1]) + (angle % count)

    def edge_weights(self) -> np.ndarray:
        """Weights of the undirected edges (upper triangle of the adjacency)."""
        return sparse.triu(self.adjacency, k=1).data

    def summary(self) -> dict[str, Any]:
        return {
            "spec_hash": self.spec_hash,
            "r_max": self.r_max,
            "h": self.h,
            "rings": self.ring_count,
            "max_ring_nodes": int(self.ring_counts.max()),
            "nodes": self.node_count,
            "edges": self.edge_count,
            "stencil": self.stencil,
            "order": self.order,
        }


@dataclass(frozen=True)
class DistanceEstimate:
    """
    A graph distance with its error bar.

    Attributes:
        value: Shortest-path length including both snap segments
        error: Error bar; the snap segments bound how far value can sit above d_phi
            beyond discretization error
        snap_correction: tau-length of the two snap segments (included in value)
    """

    value: float
    error: float
    snap_correction: float

    def to_dict(self) -> dict[str, float]:
        return {"value": self.value, "error": self.error, "snap_correction": self.snap_correction}
