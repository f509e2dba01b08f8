"""
Decay Data Models
=================

SamplePair      one (z, w) evaluation: normalized kernel, d_phi, d_tau and error bars
SampleSet       the pairs of a run plus how many were excluded
DecayReport     fitted envelope log N <= log C - sigma d_phi and its diagnostics
NearDiagonalReport
                extremes of N and of |K(z,w)| / sqrt(K(z,z) K(w,w)) near the diagonal
BoundComparisonRow
                polynomial-in-d_tau versus exponential envelopes for one exponent k
"""

import math
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Any, Optional


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    """JSON has no NaN/inf; map them to null."""
    if value is None or not math.isfinite(value):
        return None
    return float(value)


@dataclass(frozen=True)
class SamplePair:
    """
    One sampled pair of the decay run.

    Attributes:
        z, w: The two points
        log_norm_kernel: log(|K(z,w)| exp(-phi(z) - phi(w)) tau(z) tau(w))
        d_phi: Graph distance (upper approximation of d_phi)
        d_tau: |z - w| / min(tau(z), tau(w))
        kernel_err: Relative error bound of K(z, w)
        d_phi_err: Error bar of d_phi (snap segments)
        log_k_zw: log |K(z, w)|
        log_k_zz, log_k_ww: log K(z, z), log K(w, w)
        diag_err: Summed relative error bounds of the two diagonal values
    """

    z: complex
    w: complex
    log_norm_kernel: float
    d_phi: float
    d_tau: float
    kernel_err: float
    d_phi_err: float = 0.0
    log_k_zw: float = math.nan
    log_k_zz: float = math.nan
    log_k_ww: float = math.nan
    diag_err: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.log_norm_kernel):
            raise ValueError("log_norm_kernel must be finite")
        if self.d_phi < 0 or self.d_tau < 0:
            raise ValueError(f"distances must be nonnegative, got d_phi={self.d_phi}, d_tau={self.d_tau}")

    def to_row(self) -> dict[str, float]:
        """CSV row in the column order of CSV_COLUMNS."""
        return {
            "z_re": self.z.real,
            "z_im": self.z.imag,
            "w_re": self.w.real,
            "w_im": self.w.imag,
            "d_phi": self.d_phi,
            "d_tau": self.d_tau,
            "log_norm_kernel": self.log_norm_kernel,
            "kernel_err": self.kernel_err,
        }


CSV_COLUMNS = ("z_re", "z_im", "w_re", "w_im", "d_phi", "d_tau", "log_norm_kernel", "kernel_err")


@dataclass(frozen=True)
class SampleSet:
    """
    Result of sample_pairs.

    Attributes:
        pairs: Successfully evaluated pairs, in generation order
        excluded: Number of pairs dropped because an evaluation failed
        reasons: One message per excluded pair
    """

    pairs: tuple[SamplePair, ...]
    excluded: int = 0
    reasons: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[SamplePair]:
        return iter(self.pairs)

    def __getitem__(self, index: int) -> SamplePair:
        return self.pairs[index]


@dataclass(frozen=True)
class NearDiagonalReport:
    """
    Near-diagonal comparability of the kernel.

    Attributes:
        n_min, n_max: Extremes of N(z, w) = |K| exp(-phi(z) - phi(w)) tau(z) tau(w)
        coherence_min, coherence_max: Extremes of |K(z,w)| / sqrt(K(z,z) K(w,w))
        count: Number of pairs
        alpha: Pairs satisfy |z - w| <= alpha min(tau(z), tau(w))
    """

    n_min: float
    n_max: float
    coherence_min: float
    coherence_max: float
    count: int
    alpha: float

    @property
    def spread(self) -> float:
        """n_max / n_min."""
        return self.n_max / self.n_min

    def as_pair(self) -> tuple[float, float]:
        return (self.n_min, self.n_max)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_min": self.n_min,
            "n_max": self.n_max,
            "spread": self.spread,
            "coherence_min": self.coherence_min,
            "coherence_max": self.coherence_max,
            "count": self.count,
            "alpha": self.alpha,
        }


@dataclass(frozen=True)
class DecayReport:
    """
    Upper-envelope fit of log N against d_phi.

    Attributes:
        sigma_fit: Decay rate (minus the envelope slope)
        logC_fit: Intercept, lifted so that no fit-set sample lies above the line
        r2: Coefficient of determination of the envelope regression
        violations: Fit-set samples above logC_fit - sigma_fit d_phi + slack
        annulus_max: (bin centre, max log N) for every populated d_phi bin
        near_diag_ratio: (min, max) of N near the diagonal, when measured
        bin_width: d_phi bin width
        fit_min_distance: Envelope points need d_phi >= this
        fit_count: Number of samples in the fit set
        slack_profile: (slack multiplier, violations) ladder; violations never increase
        monotone_exceptions: Far-field bins whose maximum exceeds the previous bin's
        near_field_excess: max over d_phi < fit_min of log N - bound (None if no such sample)
        sample_count: Number of samples given to the fit
    """

    sigma_fit: float
    logC_fit: float
    r2: float
    violations: int
    annulus_max: tuple[tuple[float, float], ...]
    near_diag_ratio: Optional[tuple[float, float]] = None
    bin_width: float = 0.25
    fit_min_distance: float = 1.0
    fit_count: int = 0
    slack_profile: tuple[tuple[float, int], ...] = ()
    monotone_exceptions: int = 0
    near_field_excess: Optional[float] = None
    sample_count: int = 0
    envelope: tuple[tuple[float, float], ...] = field(default=(), repr=False)

    def bound(self, d_phi: float) -> float:
        """log C - sigma d_phi."""
        return self.logC_fit - self.sigma_fit * d_phi

    def to_dict(self) -> dict[str, Any]:
        return {
            "sigma_fit": self.sigma_fit,
            "logC_fit": self.logC_fit,
            "r2": _finite_or_none(self.r2),
            "violations": self.violations,
            "annulus_max": [[c, m] for c, m in self.annulus_max],
            "near_diag_ratio": list(self.near_diag_ratio) if self.near_diag_ratio else None,
            "bin_width": self.bin_width,
            "fit_min_distance": self.fit_min_distance,
            "fit_count": self.fit_count,
            "slack_profile": [{"multiplier": m, "violations": v} for m, v in self.slack_profile],
            "monotone_exceptions": self.monotone_exceptions,
            "near_field_excess": _finite_or_none(self.near_field_excess),
            "sample_count": self.sample_count,
            "envelope": [[d, y] for d, y in self.envelope],
        }


@dataclass(frozen=True)
class BoundComparisonRow:
    """
    Envelope comparison for one polynomial exponent k.

    Residuals are root-mean-square gaps (bound - envelope value) over the envelope points
    with d_tau >= the threshold; smaller means a tighter bound.

    Attributes:
        k: Exponent of the polynomial model d_tau^(-k)
        poly_logC: Tight intercept of log N <= logC - k log d_tau
        poly_residual: RMS gap of the polynomial model
        exp_phi_residual: RMS gap of the fitted exponential-in-d_phi model
        exp_tau_sigma, exp_tau_logC: Fitted exponential-in-d_tau model
        exp_tau_residual: RMS gap of the exponential-in-d_tau model
        exp_better_fraction: Share of envelope points where exp-in-d_phi is tighter
        crossover: d_phi beyond which exp-in-d_phi is tighter at every envelope point
        points: Number of envelope points compared
    """

    k: int
    poly_logC: float
    poly_residual: float
    exp_phi_residual: float
    exp_tau_sigma: float
    exp_tau_logC: float
    exp_tau_residual: float
    exp_better_fraction: float
    crossover: Optional[float]
    points: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "poly_logC": self.poly_logC,
            "poly_residual": self.poly_residual,
            "exp_phi_residual": self.exp_phi_residual,
            "exp_tau_sigma": self.exp_tau_sigma,
            "exp_tau_logC": self.exp_tau_logC,
            "exp_tau_residual": self.exp_tau_residual,
            "exp_better_fraction": self.exp_better_fraction,
            "crossover": _finite_or_none(self.crossover),
            "points": self.points,
        }
