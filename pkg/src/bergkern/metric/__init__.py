"""
Metric Package
==============

Geodesic distance of the metric tau^(-2) dz (x) dz-bar on a polar graph, with the
closed-form oracles it is checked against.

Usage:
    from bergkern.metric import build_graph, distance, radial_distance_oracle

    graph = build_graph(spec, r_max=0.95, h=0.01)
    distance(graph, spec, 0.0, 0.5)          # ~ radial_distance_oracle(spec, 0.5)
"""

from .graph import (
    build_graph,
    distance,
    distance_estimate,
    distances_from,
    graph_cache_path,
    load_graph,
    load_or_build_graph,
    local_metric_ratio,
    save_graph,
    segment_length,
)
from .models import DistanceEstimate, MetricGraph
from .oracles import dtau, hyperbolic_distance, radial_distance_oracle

__all__ = [
    "MetricGraph",
    "DistanceEstimate",
    "build_graph",
    "distance",
    "distance_estimate",
    "distances_from",
    "local_metric_ratio",
    "segment_length",
    "save_graph",
    "load_graph",
    "load_or_build_graph",
    "graph_cache_path",
    "radial_distance_oracle",
    "hyperbolic_distance",
    "dtau",
]
