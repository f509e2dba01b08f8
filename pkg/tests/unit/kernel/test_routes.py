"""Tests for the series, closed-form, Gram and gauge-twisted kernel routes."""

import cmath
import math

import numpy as np
import pytest

from bergkern.core.exceptions import (
    ConfigurationError,
    DivergenceError,
    DomainError,
    MethodMismatchError,
    TruncationError,
)
from bergkern.kernel import (
    ClosedFormKernel,
    GaugeTwistedKernel,
    GramKernel,
    KernelFactory,
    KernelValue,
    SeriesKernel,
    gauge_factor,
    kernel_closed_form,
    kernel_gram,
    kernel_series,
    wrap_phase,
)
from bergkern.kernel.moments import compute_moments
from bergkern.weights import WeightSpec

PAIRS = [
    (0.0, 0.0),
    (0.5, 0.5),
    (0.3 + 0.4j, -0.2 + 0.1j),
    (0.7j, 0.6 - 0.2j),
    (-0.8, 0.75j),
    (0.9, 0.9),
]

WORKED = [
    (0.5, 0.5, 1.5090246),
    (0.5, -0.5, 0.3259493),
]


def closed(A: float, z: complex, w: complex) -> complex:
    return (A + 1.0) / math.pi * (1.0 - z * complex(w).conjugate()) ** (-(A + 2.0))


def rel(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b)


class TestKernelValue:
    def test_from_complex(self):
        kv = KernelValue.from_complex(-2.0 + 0j, "series")
        assert kv.log_mag == pytest.approx(math.log(2.0))
        assert kv.phase == pytest.approx(math.pi)
        assert kv.value == pytest.approx(-2.0 + 0j)

    def test_conjugate_and_twist(self):
        kv = KernelValue.from_complex(1.0 + 1.0j, "gram")
        assert kv.conjugate().value == pytest.approx(1.0 - 1.0j)
        twisted = kv.twisted(math.log(2.0), math.pi / 2)
        assert twisted.value == pytest.approx(2j * (1.0 + 1.0j))

    def test_phase_wrapping(self):
        assert wrap_phase(2.5 * math.pi) == pytest.approx(0.5 * math.pi)
        assert -math.pi < wrap_phase(-math.pi) <= math.pi

    def test_rejects_negative_error(self):
        with pytest.raises(ValueError):
            KernelValue(0.0, 0.0, "series", err_rel=-1.0)


class TestClosedForm:
    def test_origin(self):
        assert kernel_closed_form(1.0, 0, 0).value == pytest.approx(2.0 / math.pi)

    @pytest.mark.parametrize("z, w", PAIRS)
    def test_matches_formula(self, z, w):
        for A in (0.0, 1.0, 3.0):
            assert rel(kernel_closed_form(A, z, w).value, closed(A, z, w)) < 1e-13

    @pytest.mark.parametrize("z, w, expected", WORKED)
    def test_worked_values(self, z, w, expected):
        assert kernel_closed_form(1.0, z, w).value == pytest.approx(expected, rel=1e-6)

    def test_outside_disc(self):
        with pytest.raises(DomainError):
            kernel_closed_form(1.0, 1.0, 0.0)

    def test_bad_exponent(self):
        with pytest.raises(ConfigurationError):
            kernel_closed_form(-1.0, 0.1, 0.1)

    def test_constant_shift(self):
        shifted = ClosedFormKernel(WeightSpec(A=1.0, harmonic_coeffs=(0.25,)))
        assert shifted.evaluate(0.3, 0.1).value == pytest.approx(math.exp(0.5) * closed(1.0, 0.3, 0.1))

    def test_only_for_b_zero(self, exp_spec):
        assert not ClosedFormKernel.supports(exp_spec)


class TestSeries:
    @pytest.mark.parametrize("z, w", PAIRS)
    def test_matches_closed_form(self, log_table, z, w):
        kv = kernel_series(log_table, z, w, tol=1e-10)
        assert kv.method == "series"
        assert rel(kv.value, closed(1.0, z, w)) < 1e-8
        assert kv.err_rel < 1e-8

    @pytest.mark.parametrize("z, w, expected", WORKED)
    def test_worked_values(self, log_table, z, w, expected):
        assert kernel_series(log_table, z, w, tol=1e-10).value == pytest.approx(expected, rel=1e-6)

    def test_origin_is_first_moment(self, log_table):
        kv = kernel_series(log_table, 0.0, 0.5)
        assert kv.value == pytest.approx(2.0 / math.pi)
        assert kv.terms == 1

    def test_short_table_truncates(self, log_spec):
        table = compute_moments(log_spec, N=10)
        with pytest.raises(TruncationError):
            kernel_series(table, 0.7, 0.7, tol=1e-10)

    def test_zero_length_table(self, log_spec):
        table = compute_moments(log_spec, N=0)
        with pytest.raises(TruncationError):
            kernel_series(table, 0.1, 0.1)

    def test_divergence_near_boundary(self, log_table):
        with pytest.raises(DivergenceError):
            kernel_series(log_table, 0.9999, 0.9999, divergence_margin=1e-3)

    def test_outside_disc(self, log_table):
        with pytest.raises(DomainError):
            kernel_series(log_table, 1.2, 0.0)

    def test_hermitian(self, exp_series):
        z, w = 0.3 + 0.5j, -0.6 + 0.1j
        assert exp_series.evaluate(w, z).value == pytest.approx(exp_series.evaluate(z, w).value.conjugate())

    def test_rejects_foreign_table(self, log_table, exp_spec):
        with pytest.raises(MethodMismatchError):
            SeriesKernel(exp_spec, table=log_table)

    def test_rejects_non_radial(self, gauge_spec):
        with pytest.raises(MethodMismatchError):
            SeriesKernel(gauge_spec, N=10)


class TestGram:
    @pytest.fixture(scope="class")
    def log_gram(self, log_spec):
        return GramKernel(log_spec, N=40)

    def test_matches_closed_form(self, log_gram):
        rng = np.random.default_rng(1)
        for _ in range(10):
            z, w = 0.5 * rng.uniform(-0.7, 0.7, 2) @ [1, 1j], 0.5 * rng.uniform(-0.7, 0.7, 2) @ [1, 1j]
            assert rel(log_gram.evaluate(z, w).value, closed(1.0, z, w)) < 1e-6

    def test_radial_gram_is_well_conditioned(self, log_gram):
        assert log_gram.condition == pytest.approx(1.0, rel=1e-6)

    def test_outside_r_quad(self, log_gram):
        with pytest.raises(DomainError):
            log_gram.evaluate(0.95, 0.0)

    def test_bad_size(self, log_spec):
        with pytest.raises(ConfigurationError):
            GramKernel(log_spec, N=61)

    def test_function_form(self, log_spec, log_gram):
        kv = kernel_gram(log_spec, 40, 0.2, 0.1j, kernel=log_gram)
        assert rel(kv.value, closed(1.0, 0.2, 0.1j)) < 1e-6


class TestGauge:
    def test_factor(self, gauge_spec):
        z, w = 0.3 + 0.1j, -0.2j
        log_factor, phase = gauge_factor(gauge_spec, z, w)
        g = lambda x: (0.3 + 0.2j) * x  # noqa: E731
        expected = cmath.exp(g(z) + g(w).conjugate())
        assert cmath.exp(complex(log_factor, phase)) == pytest.approx(expected)

    def test_gram_agrees_with_twisted_closed_form(self, gauge_spec, log_spec):
        gram = GramKernel(gauge_spec, N=40)
        twisted = GaugeTwistedKernel(gauge_spec, ClosedFormKernel(log_spec))
        rng = np.random.default_rng(7)
        for _ in range(20):
            r = 0.5 * np.sqrt(rng.uniform(size=2))
            t = rng.uniform(0.0, 2.0 * math.pi, size=2)
            z, w = r * np.exp(1j * t)
            assert rel(gram.evaluate(z, w).value, twisted.evaluate(z, w).value) < 1e-7

    def test_base_must_match(self, gauge_spec):
        with pytest.raises(MethodMismatchError):
            GaugeTwistedKernel(gauge_spec, ClosedFormKernel(WeightSpec(A=2.0)))

    def test_method_tag_follows_base(self, gauge_spec, log_closed):
        assert GaugeTwistedKernel(gauge_spec, log_closed).METHOD == "closed_form"


class TestFactory:
    def test_auto(self, log_spec, exp_spec):
        assert KernelFactory.resolve_auto(log_spec) == "closed_form"
        assert KernelFactory.resolve_auto(exp_spec) == "series"

    def test_aliases(self):
        assert KernelFactory.normalize_method("closed") == "closed_form"
        assert KernelFactory.normalize_method("Closed-Form") == "closed_form"
        assert "gram" in KernelFactory.get_supported_methods()

    def test_unknown_method(self):
        with pytest.raises(ConfigurationError):
            KernelFactory.normalize_method("magic")

    def test_closed_form_route(self, log_spec):
        assert isinstance(KernelFactory.create(log_spec, "auto"), ClosedFormKernel)

    def test_twists_radial_routes(self, gauge_spec):
        kernel = KernelFactory.create(gauge_spec, "closed")
        assert isinstance(kernel, GaugeTwistedKernel)
        series = KernelFactory.create(gauge_spec, "series", N=300)
        assert isinstance(series, GaugeTwistedKernel)
        z, w = 0.2 - 0.3j, 0.4j
        assert rel(series.evaluate(z, w).value, kernel.evaluate(z, w).value) < 1e-8

    def test_closed_form_mismatch(self, exp_spec):
        with pytest.raises(MethodMismatchError):
            KernelFactory.create(exp_spec, "closed")

    def test_gram_handles_any_weight(self, gauge_spec):
        assert isinstance(KernelFactory.create(gauge_spec, "gram", N=10), GramKernel)
