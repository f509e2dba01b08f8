"""
Shared fixtures.

Settings are isolated per test: no on-disk cache, outputs under tmp_path. Expensive
objects (moment tables, metric graphs) are built once per session.
"""

import math

import pytest

from bergkern.core.config import get_settings
from bergkern.kernel.closed_form import ClosedFormKernel
from bergkern.kernel.moments import compute_moments
from bergkern.kernel.series import SeriesKernel
from bergkern.metric.graph import build_graph
from bergkern.weights.models import WeightSpec

SQRT2 = math.sqrt(2.0)


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    monkeypatch.setenv("BERGKERN_CACHE_DIR", "")
    monkeypatch.setenv("BERGKERN_OUTPUT_DIR", str(tmp_path / "runs"))
    monkeypatch.delenv("BERGKERN_THREADS", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def log_spec() -> WeightSpec:
    """Standard weight with e^(-2 phi) = 1 - |z|^2."""
    return WeightSpec(A=1.0)


@pytest.fixture(scope="session")
def half_spec() -> WeightSpec:
    """A = 1/2: tau = 1 - |z|^2, so d_phi is the hyperbolic distance."""
    return WeightSpec(A=0.5)


@pytest.fixture(scope="session")
def exp_spec() -> WeightSpec:
    return WeightSpec(A=1.0, B=1.0, alpha=0.5)


@pytest.fixture(scope="session")
def gauge_spec() -> WeightSpec:
    return WeightSpec(A=1.0, harmonic_coeffs=(0.0, 0.3 + 0.2j))


@pytest.fixture(scope="session")
def log_table(log_spec):
    return compute_moments(log_spec, N=300, tol=1e-10)


@pytest.fixture(scope="session")
def log_closed(log_spec) -> ClosedFormKernel:
    return ClosedFormKernel(log_spec)


@pytest.fixture(scope="session")
def exp_series(exp_spec) -> SeriesKernel:
    return SeriesKernel(exp_spec, N=2000, tol=1e-10)


@pytest.fixture(scope="session")
def half_graph(half_spec):
    return build_graph(half_spec, r_max=0.85, h=0.02)


@pytest.fixture(scope="session")
def log_graph(log_spec):
    return build_graph(log_spec, r_max=0.9, h=0.04)
