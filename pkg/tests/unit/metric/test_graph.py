"""Tests for the metric graph and its distance queries."""

import math

import numpy as np
import pytest
from scipy.sparse import csgraph

from bergkern.core.exceptions import ConfigurationError, DomainError
from bergkern.metric import (
    build_graph,
    distance,
    distance_estimate,
    distances_from,
    graph_cache_path,
    hyperbolic_distance,
    load_graph,
    load_or_build_graph,
    local_metric_ratio,
    radial_distance_oracle,
    save_graph,
    segment_length,
)
from bergkern.metric.graph import ring_node_counts, ring_radii, stencil_offsets, stencil_order
from bergkern.weights import WeightSpec

FAR = [(0.1 + 0.2j, -0.4 + 0.3j), (0.5j, 0.6), (-0.7 + 0.1j, 0.2 - 0.5j)]
OFF_GRID = FAR + [(0.35, 0.36 + 0.01j)]


class TestGrid:
    def test_ring_counts_keep_cells_square(self, half_spec):
        h = 0.02
        radii = ring_radii(half_spec, 0.85, h)
        counts = ring_node_counts(half_spec, radii, h)
        assert np.all(counts % 8 == 0)
        euclidean_step = 2 * math.pi * radii / counts
        assert np.all(euclidean_step <= h)
        # tau = 1 - r^2 and tau(0) = 1: angular tau-step <= radial tau-step h
        assert np.all(euclidean_step / (1 - radii**2) <= h * (1 + 1e-12))

    def test_stencil_order(self):
        assert stencil_order("8", 0.01) == 1
        assert stencil_order("16", 0.01) == 2
        assert [stencil_order("auto", h) for h in (0.05, 0.04, 0.02, 0.01)] == [2, 2, 3, 4]
        assert stencil_order("auto", 1e-4) == 6
        with pytest.raises(ConfigurationError):
            stencil_order("12", 0.01)

    def test_stencil_offsets(self):
        assert sorted(stencil_offsets(1)) == [(0, 1), (1, -1), (1, 0), (1, 1)]
        second = stencil_offsets(2)
        assert len(second) == 8
        assert (2, 1) in second and (2, -1) in second and (2, 0) not in second

    def test_rings_independent_of_radius(self, exp_spec):
        small = ring_radii(exp_spec, 0.5, 0.05)
        large = ring_radii(exp_spec, 0.9, 0.05)
        np.testing.assert_array_equal(large[: small.size], small)
        assert small[-1] <= 0.5 and large[-1] <= 0.9

    def test_ring_budget(self, exp_spec):
        with pytest.raises(ConfigurationError):
            ring_radii(exp_spec, 0.99, 0.01, max_rings=10)

    def test_graph_shape(self, half_graph):
        assert half_graph.node_count == 1 + int(half_graph.ring_counts.sum())
        assert half_graph.order == 3
        assert np.all(half_graph.edge_weights() > 0)
        diff = half_graph.adjacency - half_graph.adjacency.T
        assert abs(diff).max() == 0

    def test_node_count_quadruples_when_h_halves(self, half_spec):
        coarse = build_graph(half_spec, r_max=0.85, h=0.04, stencil="8")
        fine = build_graph(half_spec, r_max=0.85, h=0.02, stencil="8")
        assert 2.8 <= fine.node_count / coarse.node_count <= 5.2

    def test_rotation_preserves_edge_weights(self, half_spec):
        graph = build_graph(half_spec, r_max=0.6, h=0.04)
        assert graph.symmetry % 8 == 0
        counts, offsets = graph.ring_counts, graph.ring_offsets
        ring = np.repeat(np.arange(graph.ring_count), counts)
        angle = np.arange(graph.node_count - 1) - np.repeat(offsets - 1, counts)
        # node images under rotation by 2 pi / 8
        image = np.concatenate([[0], offsets[ring] + (angle + counts[ring] // 8) % counts[ring]])
        np.testing.assert_allclose(graph.nodes[image], graph.nodes * np.exp(0.25j * math.pi), atol=1e-12)
        rotated = graph.adjacency[image][:, image]
        assert abs(rotated - graph.adjacency).max() <= 1e-12 * graph.adjacency.max()

    def test_triangle_inequality_on_nodes(self, half_spec, half_graph):
        rng = np.random.default_rng(7)
        interior = np.flatnonzero(np.abs(half_graph.nodes) < 0.7)
        for u, v, w in rng.choice(interior, size=(10, 3)):
            table = csgraph.dijkstra(half_graph.adjacency, indices=[u, v])
            assert table[0, w] <= table[0, v] + table[1, w] + 1e-9
            # a query between two nodes can only improve on the node-to-node path
            z, zeta = half_graph.nodes[u], half_graph.nodes[w]
            assert distance(half_graph, half_spec, z, zeta) <= table[0, w] + 1e-9

    def test_bad_parameters(self, half_spec):
        with pytest.raises(ConfigurationError):
            build_graph(half_spec, r_max=1.0, h=0.05)
        with pytest.raises(ConfigurationError):
            build_graph(half_spec, r_max=0.5, h=0.0)
        with pytest.raises(ConfigurationError):
            build_graph(half_spec, r_max=0.5, h=0.05, stencil="12")

    def test_harmonic_part_shares_graph(self, log_spec, gauge_spec, log_graph):
        assert distance(log_graph, gauge_spec, 0.1, 0.5j) == distance(log_graph, log_spec, 0.1, 0.5j)


class TestDistance:
    @pytest.mark.parametrize("r", [0.2, 0.5, 0.8])
    def test_radial_matches_arctanh(self, half_spec, half_graph, r):
        value = distance(half_graph, half_spec, 0.0, r)
        assert value == pytest.approx(math.atanh(r), rel=0.02)

    @pytest.mark.parametrize("r", [0.3, 0.7])
    def test_radial_oracle(self, exp_spec, r):
        graph = build_graph(exp_spec, r_max=0.8, h=0.02)
        assert distance(graph, exp_spec, 0.0, r) == pytest.approx(radial_distance_oracle(exp_spec, r), rel=0.02)

    @pytest.mark.parametrize("z, w", OFF_GRID)
    def test_dominates_hyperbolic_distance(self, half_spec, half_graph, z, w):
        """For A = 1/2, d_phi is the hyperbolic distance; chord paths can only be longer."""
        assert distance(half_graph, half_spec, z, w) >= hyperbolic_distance(z, w) * (1.0 - 1e-4)

    @pytest.mark.parametrize("z, w", FAR)
    def test_close_to_hyperbolic_distance(self, half_spec, half_graph, z, w):
        assert distance(half_graph, half_spec, z, w) <= hyperbolic_distance(z, w) * 1.08

    @pytest.mark.parametrize("z, w", OFF_GRID)
    def test_symmetric(self, half_spec, half_graph, z, w):
        assert distance(half_graph, half_spec, z, w) == distance(half_graph, half_spec, w, z)

    def test_identical_points(self, half_spec, half_graph):
        estimate = distance_estimate(half_graph, half_spec, 0.3j, 0.3j)
        assert estimate.value == 0.0 and estimate.error == 0.0

    def test_batch_matches_single(self, half_spec, half_graph):
        targets = [0.6, -0.2j, 0.4 + 0.4j, 0.1 + 0.05j]
        batch = distances_from(half_graph, half_spec, 0.1 + 0.05j, targets)
        for w, estimate in zip(targets, batch):
            assert estimate.value == pytest.approx(distance(half_graph, half_spec, 0.1 + 0.05j, w), rel=1e-12)
        assert batch[-1].value == 0.0

    def test_outside_graph(self, half_spec, half_graph):
        with pytest.raises(DomainError):
            distance(half_graph, half_spec, 0.0, 0.9)

    def test_graph_of_other_weight(self, exp_spec, half_graph):
        with pytest.raises(ConfigurationError):
            distance(half_graph, exp_spec, 0.0, 0.5)

    def test_monotone_in_radius(self, half_spec, half_graph):
        smaller = build_graph(half_spec, r_max=0.7, h=0.02)
        z, w = 0.1 + 0.2j, -0.4 + 0.3j
        assert distance(half_graph, half_spec, z, w) <= distance(smaller, half_spec, z, w) + 1e-12

    def test_wider_stencil_is_tighter(self, half_spec, half_graph):
        z, w = 0.5j, 0.6
        eight = build_graph(half_spec, r_max=0.85, h=0.02, stencil="8")
        sixteen = build_graph(half_spec, r_max=0.85, h=0.02, stencil="16")
        assert distance(half_graph, half_spec, z, w) <= distance(sixteen, half_spec, z, w) + 1e-12
        assert distance(sixteen, half_spec, z, w) <= distance(eight, half_spec, z, w) + 1e-12


@pytest.mark.slow
class TestOffRayConvergence:
    """For A = 1/2, d_phi is the hyperbolic distance."""

    @pytest.fixture(scope="class")
    def levels(self, half_spec):
        return [build_graph(half_spec, r_max=0.85, h=h) for h in (0.04, 0.01)]

    @pytest.mark.parametrize("z, w", [(0.5j, 0.6), (0.5, 0.5j), (0.7, 0.7j)])
    def test_error_shrinks_with_h(self, half_spec, levels, z, w):
        exact = hyperbolic_distance(z, w)
        coarse, fine = ((distance(graph, half_spec, z, w) - exact) / exact for graph in levels)
        assert fine >= -1e-4
        assert fine <= 0.015
        assert fine < 0.5 * coarse


def test_segment_length_is_simpson(half_spec):
    """1/tau = 1/(1 - r^2): nodes 0, 1/4, 1/2 give (1 + 64/15 + 4/3) / 12 = 0.55."""
    value = float(segment_length(half_spec, np.array([0.0]), np.array([0.5]))[0])
    assert value == pytest.approx(0.55, rel=1e-12)
    assert value == pytest.approx(math.atanh(0.5), rel=2e-3)


def test_local_metric_ratio_bounded(half_spec, half_graph):
    ratio = local_metric_ratio(half_graph, half_spec, 0.3 + 0.1j, radius_factor=0.5)
    assert 0.5 < ratio < 3.0


def test_cache_round_trip(half_spec, tmp_path):
    graph = build_graph(half_spec, r_max=0.5, h=0.05)
    path = save_graph(graph, graph_cache_path(tmp_path, half_spec, 0.05, 0.5))
    loaded = load_graph(path)
    assert loaded.summary() == graph.summary()
    assert (loaded.adjacency != graph.adjacency).nnz == 0
    cached = load_or_build_graph(half_spec, 0.5, 0.05, cache_dir=tmp_path)
    assert cached.summary() == graph.summary()


def test_unreadable_cache(tmp_path):
    path = tmp_path / "broken.npz"
    path.write_bytes(b"not a graph")
    with pytest.raises(ConfigurationError):
        load_graph(path)


def test_large_h_is_rejected():
    with pytest.raises(ConfigurationError):
        build_graph(WeightSpec(A=0.5), r_max=0.3, h=0.5)
