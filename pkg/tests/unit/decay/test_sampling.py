"""Tests for pair generation and evaluation."""

import math

import numpy as np
import pytest

from bergkern.core.exceptions import ConfigurationError
from bergkern.decay import evaluate_normalized, normalized_kernel, random_pairs, ray_pairs, sample_pairs
from bergkern.kernel import GaugeTwistedKernel, GramKernel, kernel_closed_form
from bergkern.metric import hyperbolic_distance

SQRT2 = math.sqrt(2.0)


def standard_normalized(z: complex, w: complex) -> float:
    """For A = 1 the normalized kernel is sech^3(d_h) / pi."""
    return -math.log(math.pi) - 3.0 * math.log(math.cosh(hyperbolic_distance(z, w)))


class TestNormalizedKernel:
    def test_diagonal_is_constant(self, log_spec, log_closed):
        for z in (0.0, 0.5j, -0.7 + 0.2j):
            assert evaluate_normalized(log_closed, z, z) == pytest.approx(-math.log(math.pi), abs=1e-12)

    def test_off_diagonal(self, log_spec):
        z, w = 0.3 - 0.1j, -0.6j
        value = normalized_kernel(log_spec, kernel_closed_form(1.0, z, w), z, w)
        assert value == pytest.approx(standard_normalized(z, w), abs=1e-12)

    def test_harmonic_part_cancels(self, gauge_spec, log_closed):
        twisted = GaugeTwistedKernel(gauge_spec, log_closed)
        z, w = 0.2 + 0.4j, -0.5
        assert evaluate_normalized(twisted, z, w) == pytest.approx(evaluate_normalized(log_closed, z, w), abs=1e-12)


class TestPairGenerators:
    def test_ray_pairs_inside(self):
        pairs = ray_pairs(200, 0.9, seed=1)
        assert len(pairs) == 200
        assert max(max(abs(z), abs(w)) for z, w in pairs) < 0.9

    def test_ray_pairs_prefix_covers_every_ray(self):
        pairs = ray_pairs(52, 0.9, seed=1)
        assert len({z for z, _ in pairs}) == 13

    def test_small_radius_drops_centres(self):
        pairs = ray_pairs(40, 0.5, seed=0)
        assert len({z for z, _ in pairs}) == 5

    def test_deterministic(self):
        assert ray_pairs(30, 0.8, seed=4) == ray_pairs(30, 0.8, seed=4)
        assert random_pairs(30, 0.8, seed=4) == random_pairs(30, 0.8, seed=4)
        assert random_pairs(30, 0.8, seed=4) != random_pairs(30, 0.8, seed=5)

    def test_random_pairs_inside(self):
        pairs = random_pairs(500, 0.7, seed=2)
        assert max(max(abs(z), abs(w)) for z, w in pairs) < 0.7


class TestSamplePairs:
    @pytest.fixture(scope="class")
    def samples(self, log_spec, log_closed, log_graph):
        return sample_pairs(log_spec, log_graph, log_closed, count=60, seed=3)

    def test_count(self, samples):
        assert len(samples) == 60
        assert samples.excluded == 0

    def test_normalized_kernel_matches_formula(self, samples):
        for p in samples:
            assert p.log_norm_kernel == pytest.approx(standard_normalized(p.z, p.w), abs=1e-10)

    def test_distance_dominates(self, samples):
        """tau = (1 - |z|^2) / sqrt 2 makes d_phi = sqrt 2 d_h."""
        for p in samples:
            assert p.d_phi >= SQRT2 * hyperbolic_distance(p.z, p.w) * (1.0 - 1e-4)

    def test_diagonal_values(self, samples):
        for p in samples:
            expected = math.log(2.0 / math.pi) - 3.0 * math.log(1.0 - abs(p.z) ** 2)
            assert p.log_k_zz == pytest.approx(expected, abs=1e-12)

    def test_threads_do_not_change_result(self, samples, log_spec, log_closed, log_graph):
        threaded = sample_pairs(log_spec, log_graph, log_closed, count=60, seed=3, threads=2)
        assert threaded.pairs == samples.pairs

    def test_moment_table_input(self, log_spec, log_graph, log_table):
        result = sample_pairs(log_spec, log_graph, log_table, strategy="random", count=10, seed=0)
        assert len(result) + result.excluded == 10
        for p in result:
            assert p.log_norm_kernel == pytest.approx(standard_normalized(p.z, p.w), abs=1e-7)

    def test_failures_are_excluded(self, log_spec, log_graph):
        gram = GramKernel(log_spec, N=10, r_quad=0.5)
        result = sample_pairs(log_spec, log_graph, gram, count=30, seed=0)
        assert result.excluded > 0
        assert len(result) + result.excluded == 30
        assert len(result.reasons) == result.excluded

    @pytest.mark.parametrize("kwargs", [{"count": 0}, {"strategy": "grid"}])
    def test_bad_arguments(self, log_spec, log_graph, log_closed, kwargs):
        with pytest.raises(ConfigurationError):
            sample_pairs(log_spec, log_graph, log_closed, **kwargs)


def test_distances_are_finite(log_spec, log_graph, log_closed):
    result = sample_pairs(log_spec, log_graph, log_closed, strategy="random", count=20, seed=9)
    assert np.all(np.isfinite([p.d_phi for p in result]))
    assert all(p.d_tau >= 0 for p in result)
