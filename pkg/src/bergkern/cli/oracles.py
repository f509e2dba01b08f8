"""
Oracle Suite
============

Analytic checks behind `bergkern oracle-test`:

    moments          A=1, B=0: m_n = pi / ((n + 1)(n + 2))
    closed_form      series kernel against (A + 1)/pi (1 - z conj w)^-(A+2), A in {1, 3}
    radial_distance  A=1/2, B=0: graph distance(0, r) against arctanh r
    gauge            Gram kernel of phi_1 + Re(c z) against e^(g(z) + conj g(w)) x closed form
    near_diagonal    A=1, B=0: the normalized kernel equals 1/pi on the diagonal

Each oracle produces an OracleResult; the suite passes when every result is within its
tolerance.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from ..decay.checks import near_diagonal_check
from ..kernel.closed_form import ClosedFormKernel
from ..kernel.gauge import GaugeTwistedKernel
from ..kernel.gram import GramKernel
from ..kernel.models import KernelValue
from ..kernel.moments import compute_moments
from ..kernel.series import SeriesKernel
from ..metric.graph import build_graph, distance
from ..weights.models import WeightSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleResult:
    """
    Outcome of one oracle.

    Attributes:
        name: Oracle name
        error: Largest relative error measured
        tolerance: Acceptance threshold
        detail: Where the largest error occurred
    """

    name: str
    error: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return math.isfinite(self.error) and self.error <= self.tolerance

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "error": self.error if math.isfinite(self.error) else None,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        }


def relative_difference(a: KernelValue, b: KernelValue) -> float:
    """|a - b| / |b| from the log forms."""
    ratio = cmath.exp(complex(a.log_mag - b.log_mag, a.phase - b.phase))
    return abs(ratio - 1.0)


def _disc_points(rng: np.random.Generator, count: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, count))
    return r * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, count))


def moment_oracle(N: int = 200, tol: float = 1e-10) -> OracleResult:
    table = compute_moments(WeightSpec(A=1.0), N, tol)
    n = np.arange(N + 1)
    exact = np.log(math.pi / ((n + 1.0) * (n + 2.0)))
    errors = np.abs(np.expm1(table.log_m - exact))
    worst = int(np.argmax(errors))
    return OracleResult("moments", float(errors[worst]), 1e-9, f"n={worst}")


def closed_form_oracle(pairs: int = 100, radius: float = 0.8, seed: int = 0, N: int = 400) -> OracleResult:
    rng = np.random.default_rng(seed)
    worst, detail = 0.0, ""
    for A in (1.0, 3.0):
        spec = WeightSpec(A=A)
        series = SeriesKernel(spec, N=N, tol=1e-10)
        exact = ClosedFormKernel(spec)
        zs = _disc_points(rng, pairs, radius)
        ws = _disc_points(rng, pairs, radius)
        for z, w in zip(zs, ws):
            err = relative_difference(series.evaluate(z, w), exact.evaluate(z, w))
            if err > worst:
                worst, detail = err, f"A={A:g}, z={complex(z):.4f}, w={complex(w):.4f}"
    return OracleResult("closed_form", worst, 1e-8, detail)


def radial_distance_oracle_check(h: float = 0.01, radii: tuple[float, ...] = (0.2, 0.5, 0.8)) -> OracleResult:
    spec = WeightSpec(A=0.5)
    graph = build_graph(spec, r_max=max(radii) + 0.05, h=h)
    worst, detail = 0.0, ""
    for r in radii:
        exact = math.atanh(r)
        err = abs(distance(graph, spec, 0.0, r) - exact) / exact
        if err > worst:
            worst, detail = err, f"r={r:g}"
    return OracleResult("radial_distance", worst, 0.02, detail)


def gauge_oracle(
    c: complex = 0.3 + 0.2j,
    pairs: int = 20,
    radius: float = 0.5,
    N: int = 40,
    seed: int = 0,
) -> OracleResult:
    spec = WeightSpec(A=1.0, harmonic_coeffs=(0.0, c))
    gram = GramKernel(spec, N=N)
    twisted = GaugeTwistedKernel(spec, ClosedFormKernel(spec.without_harmonic()))
    rng = np.random.default_rng(seed)
    worst, detail = 0.0, ""
    for z, w in zip(_disc_points(rng, pairs, radius), _disc_points(rng, pairs, radius)):
        err = relative_difference(gram.evaluate(z, w), twisted.evaluate(z, w))
        if err > worst:
            worst, detail = err, f"z={complex(z):.4f}, w={complex(w):.4f}"
    return OracleResult("gauge", worst, 1e-4, detail)


def near_diagonal_oracle(points: int = 50, r_max: float = 0.9, seed: int = 0) -> OracleResult:
    report = near_diagonal_check(
        ClosedFormKernel(WeightSpec(A=1.0)), samples=points, seed=seed, r_max=r_max, diagonal_only=True
    )
    target = 1.0 / math.pi
    err = max(abs(report.n_min - target), abs(report.n_max - target)) / target
    return OracleResult("near_diagonal", err, 1e-8, f"{report.count} points")


ORACLES: dict[str, Callable[[], OracleResult]] = {
    "moments": moment_oracle,
    "closed_form": closed_form_oracle,
    "radial_distance": radial_distance_oracle_check,
    "gauge": gauge_oracle,
    "near_diagonal": near_diagonal_oracle,
}


def run_oracle_suite(names: Optional[list[str]] = None) -> list[OracleResult]:
    """Run the named oracles (all when None) in registry order."""
    selected = list(ORACLES) if not names else [n for n in ORACLES if n in names]
    results = []
    for name in selected:
        result = ORACLES[name]()
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(
            level, "oracle %s: error %.3g (tol %.1g) %s",
            name, result.error, result.tolerance, "ok" if result.passed else "FAILED",
        )
        results.append(result)
    return results
