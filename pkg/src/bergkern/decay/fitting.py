"""
Envelope Fitting
================

The decay estimate is a one-sided bound, so only the upper envelope of log N against
d_phi carries information:

    1. bin the samples by floor(d_phi / bin_width) and keep each bin's maximum
    2. least-squares line through the envelope points with d_phi >= fit_min_distance
    3. sigma = -slope; the intercept is lifted until no fit-set sample lies above the line

Violations are then counted against  logC - sigma d_phi + slack. The default slack of a
sample is slack_factor x (kernel_err + sigma d_phi_err), its propagated error bar in log
units.

compare_bounds sets the fitted exponential envelope against the polynomial model
log N <= logC_k - k log d_tau and an exponential model in d_tau.
"""

import logging
import math
from typing import Iterable, Optional, Sequence

import numpy as np

from ..core.exceptions import ConfigurationError, InsufficientRangeError
from .models import BoundComparisonRow, DecayReport, SamplePair

logger = logging.getLogger(__name__)

MIN_FAR_SAMPLES = 10
SLACK_MULTIPLIERS = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0)


def _arrays(samples: Iterable[SamplePair]) -> tuple[list[SamplePair], np.ndarray, np.ndarray]:
    pairs = list(samples)
    d = np.array([p.d_phi for p in pairs], dtype=float)
    y = np.array([p.log_norm_kernel for p in pairs], dtype=float)
    return pairs, d, y


def upper_envelope(d: np.ndarray, y: np.ndarray, bin_width: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Per-bin maxima.

    Returns:
        (bins, indices): bin numbers floor(d / bin_width) in increasing order and the index
        of the sample holding each bin's maximum (first one on ties)
    """
    if not bin_width > 0:
        raise ConfigurationError(f"bin_width must be positive, got {bin_width}")
    bins = np.floor(d / bin_width).astype(np.int64)
    unique = np.unique(bins)
    indices = np.empty(unique.size, dtype=np.int64)
    for k, b in enumerate(unique):
        members = np.flatnonzero(bins == b)
        indices[k] = members[int(np.argmax(y[members]))]
    return unique, indices


def _line_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least squares y = a + b x; returns (a, b, r2) with r2 = 1 for a perfect fit."""
    design = np.column_stack([np.ones_like(x), x])
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - (a + b * x)
    ss_res = float(np.dot(residual, residual))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_res <= 1e-24 * max(1.0, float(np.dot(y, y))):
        r2 = 1.0
    elif ss_tot == 0:
        r2 = 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return float(a), float(b), r2


def default_slack(samples: Sequence[SamplePair], sigma: float, slack_factor: float = 3.0) -> np.ndarray:
    """slack_factor x (kernel_err + sigma d_phi_err) per sample."""
    kernel_err = np.array([p.kernel_err for p in samples], dtype=float)
    d_err = np.array([p.d_phi_err for p in samples], dtype=float)
    return slack_factor * (kernel_err + abs(sigma) * d_err)


def fit_decay(
    samples: Sequence[SamplePair],
    bin_width: float = 0.25,
    slack: Optional[float] = None,
    fit_min_distance: float = 1.0,
    slack_factor: float = 3.0,
) -> DecayReport:
    """
    Fit the upper envelope log N <= logC - sigma d_phi.

    Args:
        samples: Evaluated pairs
        bin_width: Width of the d_phi bins
        slack: Uniform slack for violation counting; None uses the per-sample error bars
        fit_min_distance: Only samples with d_phi >= this enter the fit
        slack_factor: Multiplier of the per-sample error bars when slack is None

    Raises:
        InsufficientRangeError: Fewer than 10 samples or fewer than 2 bins at d_phi >= fit_min
    """
    pairs, d, y = _arrays(samples)
    far = d >= fit_min_distance
    n_far = int(far.sum())
    if n_far < MIN_FAR_SAMPLES:
        raise InsufficientRangeError(
            f"need >= {MIN_FAR_SAMPLES} samples with d_phi >= {fit_min_distance:g}, got {n_far}",
            achieved=float(n_far),
            requested=float(MIN_FAR_SAMPLES),
        )

    d_far, y_far = d[far], y[far]
    bins, idx = upper_envelope(d_far, y_far, bin_width)
    if bins.size < 2:
        raise InsufficientRangeError(
            f"far-field samples fill only {bins.size} bin(s) of width {bin_width:g}",
            achieved=float(bins.size),
            requested=2.0,
        )

    env_d, env_y = d_far[idx], y_far[idx]
    _, slope, r2 = _line_fit(env_d, env_y)
    sigma = -slope

    lifted = y_far + sigma * d_far
    log_c = float(np.max(lifted))
    excess = lifted - log_c

    far_pairs = [p for p, keep in zip(pairs, far) if keep]
    if slack is None:
        base_slack = default_slack(far_pairs, sigma, slack_factor)
    else:
        if slack < 0:
            raise ConfigurationError(f"slack must be nonnegative, got {slack}")
        base_slack = np.full(n_far, float(slack))
    violations = int(np.sum(excess > base_slack))

    profile = tuple((m, int(np.sum(excess > m * base_slack))) for m in SLACK_MULTIPLIERS)

    all_bins, all_idx = upper_envelope(d, y, bin_width)
    annulus = tuple(((int(b) + 0.5) * bin_width, float(y[i])) for b, i in zip(all_bins, all_idx))
    far_maxima = [m for (_, m), b in zip(annulus, all_bins) if b * bin_width >= fit_min_distance]
    exceptions = int(sum(1 for prev, cur in zip(far_maxima, far_maxima[1:]) if cur > prev))

    near = ~far
    near_excess = float(np.max(y[near] + sigma * d[near] - log_c)) if near.any() else None

    logger.info(
        "decay fit: sigma=%.6g logC=%.6g r2=%.4f, %d/%d violations, %d envelope bins",
        sigma, log_c, r2, violations, n_far, bins.size,
    )
    return DecayReport(
        sigma_fit=sigma,
        logC_fit=log_c,
        r2=r2,
        violations=violations,
        annulus_max=annulus,
        bin_width=bin_width,
        fit_min_distance=fit_min_distance,
        fit_count=n_far,
        slack_profile=profile,
        monotone_exceptions=exceptions,
        near_field_excess=near_excess,
        sample_count=len(pairs),
        envelope=tuple(zip(env_d.tolist(), env_y.tolist())),
    )


def _rms(values: np.ndarray) -> float:
    return float(math.sqrt(np.mean(values**2))) if values.size else math.nan


def compare_bounds(
    report: DecayReport,
    samples: Sequence[SamplePair],
    k_list: Sequence[int],
    d_tau_min: float = 2.0,
) -> list[BoundComparisonRow]:
    """
    Compare the exponential-in-d_phi envelope with polynomial d_tau^(-k) envelopes.

    Every model is made tight on the samples with d_tau >= d_tau_min (its intercept is
    lifted to the highest sample) and judged by its RMS gap above the d_phi envelope
    points of that set.

    Raises:
        ConfigurationError: Non-positive k
        InsufficientRangeError: Fewer than 2 envelope points with d_tau >= d_tau_min
    """
    if not k_list:
        return []
    if any(int(k) <= 0 for k in k_list):
        raise ConfigurationError(f"k_list must hold positive integers, got {list(k_list)}")

    pairs = [p for p in samples if p.d_tau >= d_tau_min]
    _, d, y = _arrays(pairs)
    if len(pairs) < 2:
        raise InsufficientRangeError(
            f"need samples with d_tau >= {d_tau_min:g}, got {len(pairs)}",
            achieved=float(len(pairs)),
            requested=2.0,
        )
    t = np.array([p.d_tau for p in pairs], dtype=float)
    _, idx = upper_envelope(d, y, report.bin_width)
    if idx.size < 2:
        raise InsufficientRangeError("fewer than 2 envelope points for the bound comparison")

    env_d, env_t, env_y = d[idx], t[idx], y[idx]
    order = np.argsort(env_d)
    env_d, env_t, env_y = env_d[order], env_t[order], env_y[order]

    exp_phi_gap = report.bound(env_d) - env_y

    _, tau_slope, _ = _line_fit(env_t, env_y)
    tau_sigma = -tau_slope
    tau_log_c = float(np.max(y + tau_sigma * t))
    exp_tau_gap = tau_log_c - tau_sigma * env_t - env_y

    rows = []
    for k in k_list:
        k = int(k)
        poly_log_c = float(np.max(y + k * np.log(t)))
        poly_gap = poly_log_c - k * np.log(env_t) - env_y
        better = exp_phi_gap < poly_gap
        crossover = None
        if better[-1]:
            last_worse = np.flatnonzero(~better)
            crossover = float(env_d[last_worse[-1] + 1]) if last_worse.size else float(env_d[0])
        rows.append(
            BoundComparisonRow(
                k=k,
                poly_logC=poly_log_c,
                poly_residual=_rms(poly_gap),
                exp_phi_residual=_rms(exp_phi_gap),
                exp_tau_sigma=tau_sigma,
                exp_tau_logC=tau_log_c,
                exp_tau_residual=_rms(exp_tau_gap),
                exp_better_fraction=float(np.mean(better)),
                crossover=crossover,
                points=int(idx.size),
            )
        )
        logger.debug(
            "bound comparison k=%d: poly rms %.4g vs exp rms %.4g",
            k, rows[-1].poly_residual, rows[-1].exp_phi_residual,
        )
    return rows
