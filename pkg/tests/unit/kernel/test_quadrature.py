"""Tests for the adaptive Gauss-Legendre panel quadrature."""

import math

import numpy as np
import pytest

from bergkern.core.exceptions import ConfigurationError, QuadratureError
from bergkern.kernel.quadrature import AdaptivePanelQuadrature, gauss_legendre_unit, graded_breakpoints


def test_unit_rule_integrates_polynomials():
    nodes, weights = gauss_legendre_unit(10)
    assert weights.sum() == pytest.approx(1.0)
    for k in range(20):
        assert np.dot(weights, nodes**k) == pytest.approx(1.0 / (k + 1), rel=1e-13)


def test_graded_breakpoints():
    np.testing.assert_allclose(graded_breakpoints(0.0, 1.0, levels=3), [0.0, 0.5, 0.75, 0.875, 1.0])
    left = graded_breakpoints(0.0, 1.0, levels=3, toward="a")
    np.testing.assert_allclose(left, [0.0, 0.125, 0.25, 0.5, 1.0])


def test_graded_breakpoints_bad_interval():
    with pytest.raises(ConfigurationError):
        graded_breakpoints(1.0, 1.0)


def test_linear_vector_integrand():
    quad = AdaptivePanelQuadrature(order=20)
    n = np.arange(10)
    result = quad.integrate(lambda x: x[:, None] ** n[None, :], [0.0, 1.0], tol=1e-13)
    np.testing.assert_allclose(result.value, 1.0 / (n + 1), rtol=1e-13)


def test_linear_complex_integrand():
    quad = AdaptivePanelQuadrature(order=16)
    result = quad.integrate(lambda x: np.exp(1j * x)[:, None], [0.0, math.pi], tol=1e-12)
    assert complex(result.value[0]) == pytest.approx(2j, abs=1e-12)


def test_log_integrand_with_endpoint_peak():
    """integral_0^1 t^n dt for n up to 2000 in log space."""
    quad = AdaptivePanelQuadrature(order=20)
    n = np.array([0.0, 10.0, 500.0, 2000.0])
    result = quad.integrate_log(
        lambda t: np.log(t)[:, None] * n[None, :], graded_breakpoints(0.0, 1.0, levels=20), tol=1e-12
    )
    np.testing.assert_allclose(result.log_value, -np.log(n + 1), atol=1e-11)
    assert np.all(result.rel_err <= 1e-12)


def test_panel_budget_exhausted():
    quad = AdaptivePanelQuadrature(order=4, max_panels=8)
    with pytest.raises(QuadratureError) as info:
        quad.integrate(lambda x: (1.0 / np.sqrt(x))[:, None], [0.0, 1.0], tol=1e-14)
    assert info.value.requested == 1e-14


def test_bad_breakpoints():
    quad = AdaptivePanelQuadrature()
    with pytest.raises(ConfigurationError):
        quad.integrate(lambda x: x[:, None], [1.0, 0.0], tol=1e-10)


@pytest.mark.parametrize("order", [2, 7])
def test_order_must_be_even(order):
    with pytest.raises(ConfigurationError):
        AdaptivePanelQuadrature(order=order)


def test_panel_error_compares_order_with_half_order():
    """On one panel the error estimate is |Q_20 - Q_10|; x^25 is exact only for the first."""
    quad = AdaptivePanelQuadrature(order=20)
    result = quad.integrate(lambda x: (x**25)[:, None], [0.0, 1.0], tol=1.0)
    nodes, weights = gauss_legendre_unit(10)
    low = float(np.dot(weights, nodes**25))
    assert result.panels == 1
    assert result.value[0] == pytest.approx(1.0 / 26.0, rel=1e-13)
    assert result.abs_err[0] == pytest.approx(abs(1.0 / 26.0 - low), rel=1e-6)
    assert result.abs_err[0] > 0
