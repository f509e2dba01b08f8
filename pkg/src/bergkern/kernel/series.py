"""
Moment Series Kernel
====================

For a radial weight the monomials are orthogonal, so

    K(z, w) = sum_n (z conj(w))^n / m_n

Summation
---------
With x = z conj(w) the n-th term has log-magnitude  n log|x| - log m_n  and phase
n arg(x). All terms are shifted by the largest log-magnitude before exponentiating,
so the partial sums stay in range even when m_n spans hundreds of decades.

Truncation
----------
The term ratio |a_{n+1} / a_n| = |x| m_n / m_{n+1}. The tail after term M is bounded
geometrically with q = |x| * max(m_k / m_{k+1}) over the last few k <= M:

    tail <= |a_M| q / (1 - q)

and M is the first index where that bound is within tol of the partial sum. m_n / m_{n+1}
tends to 1 for these weights, so near the boundary q creeps toward 1; a table that runs
out before the bound is met raises instead of truncating silently.
"""

import logging
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..core.exceptions import DivergenceError, MethodMismatchError, TruncationError
from ..weights.models import WeightSpec
from .base import BaseKernel
from .models import KernelValue, MomentTable
from .moments import load_or_compute_moments

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


def _window_max(values: np.ndarray, window: int) -> np.ndarray:
    """max(values[k - window + 1 .. k]) for every k (shorter windows at the start)."""
    padded = np.concatenate([np.full(window - 1, -np.inf), values])
    return sliding_window_view(padded, window).max(axis=1)


def kernel_series(
    table: MomentTable,
    z: complex,
    w: complex,
    tol: float = 1e-10,
    ratio_window: int = 5,
    divergence_margin: float = 1e-3,
) -> KernelValue:
    """
    Sum the moment series for K(z, w).

    Args:
        table: Moments of the radial weight
        z, w: Points of the open unit disc
        tol: Relative tolerance for the tail bound
        ratio_window: Number of recent moment ratios used for q
        divergence_margin: The series is treated as divergent once q >= 1 - margin

    Returns:
        KernelValue with method "series"; err_rel = tail bound + propagated moment error

    Raises:
        TruncationError: The table ends before the tail bound is met (enlarge N)
        DivergenceError: q >= 1 - margin at the end of the table
    """
    BaseKernel._check_point(z, name="z")
    BaseKernel._check_point(w, name="w")
    x = complex(z) * complex(w).conjugate()

    if x == 0:
        return KernelValue(
            log_mag=-float(table.log_m[0]),
            phase=0.0,
            method="series",
            err_rel=float(table.rel_err[0]),
            terms=1,
        )
    if table.N < 1:
        raise TruncationError("a moment table with N = 0 only covers x = 0", requested=tol)

    n = np.arange(table.N + 1)
    log_abs_x = math.log(abs(x))
    log_terms = n * log_abs_x - table.log_m
    shift = float(np.max(log_terms))
    magnitudes = np.exp(log_terms - shift)
    terms = magnitudes * np.exp(1j * n * math.atan2(x.imag, x.real))
    partial = np.cumsum(terms)

    # q at index M uses the ratios m_k / m_{k+1} for k in the window ending at M.
    log_q = log_abs_x + _window_max(table.log_ratios, ratio_window)
    q = np.exp(log_q)
    head = np.abs(partial[:-1])
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = np.where(q < 1.0, magnitudes[:-1] * q / (1.0 - q), np.inf)
        accepted = (q < 1.0 - divergence_margin) & (tail <= tol * head)

    if not accepted.any():
        final_q = float(q[-1])
        if final_q >= 1.0 - divergence_margin:
            raise DivergenceError(
                f"series ratio q={final_q:.6g} reaches 1 - {divergence_margin:g} at |x|={abs(x):.6g}",
                achieved=final_q,
                requested=1.0 - divergence_margin,
            )
        achieved = float(tail[-1] / head[-1]) if head[-1] > 0 else math.inf
        raise TruncationError(
            f"tail bound not met with N={table.N} terms at |x|={abs(x):.6g}",
            achieved=achieved,
            requested=tol,
        )

    M = int(np.argmax(accepted))
    total = partial[M]
    size = abs(total)
    if size == 0:
        raise TruncationError("partial sum vanished", requested=tol)

    moment_err = float(np.dot(magnitudes[: M + 1], table.rel_err[: M + 1])) / size
    rounding = (M + 1) * _EPS * float(np.sum(magnitudes[: M + 1])) / size
    err_rel = float(tail[M]) / size + moment_err + rounding
    logger.debug("series kernel |x|=%.4g: %d terms, q=%.4g, err %.3g", abs(x), M + 1, q[M], err_rel)

    return KernelValue(
        log_mag=shift + math.log(size),
        phase=math.atan2(total.imag, total.real),
        method="series",
        err_rel=err_rel,
        terms=M + 1,
    )


class SeriesKernel(BaseKernel):
    """
    Moment series kernel of a radial weight.

    The moment table is built (or loaded from cache_dir) once at construction.

    Usage:
        kernel = SeriesKernel(WeightSpec(A=1.0, B=1.0, alpha=0.5), N=2000)
        kv = kernel.evaluate(0.3, 0.5j)
    """

    METHOD = "series"

    def __init__(
        self,
        spec: WeightSpec,
        N: int = 2000,
        tol: float = 1e-10,
        table: Optional[MomentTable] = None,
        ratio_window: int = 5,
        divergence_margin: float = 1e-3,
        cache_dir: Optional[Union[str, Path]] = None,
        **quad_options: int,
    ) -> None:
        if not self.supports(spec):
            raise MethodMismatchError(f"series kernel needs a radial weight, got {spec.describe()}")
        super().__init__(spec)
        if table is not None and table.spec_hash != spec.spec_hash:
            raise MethodMismatchError("moment table was built for a different weight")
        self.table = table if table is not None else load_or_compute_moments(
            spec, N, tol, cache_dir=cache_dir, **quad_options
        )
        self.tol = tol
        self.ratio_window = ratio_window
        self.divergence_margin = divergence_margin

    @classmethod
    def supports(cls, spec: WeightSpec) -> bool:
        return spec.is_radial

    def evaluate(self, z: complex, w: complex) -> KernelValue:
        return kernel_series(self.table, z, w, self.tol, self.ratio_window, self.divergence_margin)
