"""
Decay Package
=============

Samples the normalized kernel N(z, w) against the metric distance d_phi(z, w), fits the
one-sided envelope log N <= log C - sigma d_phi and runs the kernel diagnostics that go
with it.

Usage:
    from bergkern.decay import sample_pairs, fit_decay, write_decay_outputs

    samples = sample_pairs(spec, graph, kernel, count=500, seed=0)
    report = fit_decay(samples)
    write_decay_outputs("runs/exp", report, samples)
"""

from .checks import (
    cauchy_schwarz_violations,
    mean_value_check,
    metric_comparison_violations,
    near_diagonal_check,
)
from .export import plot_data, samples_to_csv, write_decay_outputs
from .fitting import compare_bounds, fit_decay, upper_envelope
from .models import (
    BoundComparisonRow,
    DecayReport,
    NearDiagonalReport,
    SamplePair,
    SampleSet,
)
from .normalize import evaluate_normalized, normalized_kernel
from .sampling import random_pairs, ray_pairs, sample_pairs

__all__ = [
    "SamplePair",
    "SampleSet",
    "DecayReport",
    "NearDiagonalReport",
    "BoundComparisonRow",
    "normalized_kernel",
    "evaluate_normalized",
    "sample_pairs",
    "ray_pairs",
    "random_pairs",
    "fit_decay",
    "compare_bounds",
    "upper_envelope",
    "near_diagonal_check",
    "mean_value_check",
    "cauchy_schwarz_violations",
    "metric_comparison_violations",
    "samples_to_csv",
    "plot_data",
    "write_decay_outputs",
]
