"""Tests for the empirical OP(D) certification."""

import math

import numpy as np
import pytest

from bergkern.core.exceptions import ConfigurationError
from bergkern.weights import check_op_conditions, sample_points


def test_sample_points_cover_request():
    points = sample_points(100, 0.9, seed=3)
    assert points.size >= 100
    assert np.max(np.abs(points)) == pytest.approx(0.9)
    assert np.all(np.abs(points) <= 0.9 + 1e-15)


def test_sample_points_deterministic():
    np.testing.assert_array_equal(sample_points(64, 0.95, seed=7), sample_points(64, 0.95, seed=7))


@pytest.mark.parametrize("n, r_max", [(0, 0.9), (10, 1.0), (10, 0.0)])
def test_sample_points_bad_arguments(n, r_max):
    with pytest.raises(ConfigurationError):
        sample_points(n, r_max)


def test_standard_weight_constants(log_spec):
    """tau = (1 - |z|^2) / sqrt 2: C1 and C2 both approach sqrt 2."""
    report = check_op_conditions(log_spec, r_max=0.99, n_samples=1024)
    assert report.C1_est == pytest.approx(math.sqrt(2.0), rel=0.05)
    assert report.C2_est == pytest.approx(math.sqrt(2.0), rel=0.05)
    assert report.C1_est <= math.sqrt(2.0) * (1 + 1e-12)
    assert report.C2_est <= math.sqrt(2.0) * (1 + 1e-12)


def test_exponential_weight_has_witness(exp_spec):
    report = check_op_conditions(exp_spec, r_max=0.99, n_samples=1024)
    assert report.certified
    c3, a = report.C3_found
    assert 0.0 <= c3 < 1.0 - report.margin
    assert a in (0.5, 1.0, 2.0, 4.0, 8.0)


def test_scan_is_recorded_in_grid_order(exp_spec):
    grid = (8.0, 4.0, 2.0)
    report = check_op_conditions(exp_spec, r_max=0.95, n_samples=256, a_grid=grid)
    assert [a for a, _ in report.a_scan] == list(grid)


def test_single_point_is_degenerate(exp_spec):
    report = check_op_conditions(exp_spec, r_max=0.5, n_samples=1)
    assert report.sample_count == 1
    assert report.C1_est == 0.0
    assert report.C3_found is None
    assert report.diagnostics


def test_bad_grid(exp_spec):
    with pytest.raises(ConfigurationError):
        check_op_conditions(exp_spec, a_grid=())
    with pytest.raises(ConfigurationError):
        check_op_conditions(exp_spec, a_grid=(1.0, -2.0))


def test_report_serializes(exp_spec):
    data = check_op_conditions(exp_spec, r_max=0.9, n_samples=64).to_dict()
    assert set(data) >= {"C1_est", "C2_est", "C3_found", "sample_count", "r_max", "a_scan"}
