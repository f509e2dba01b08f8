"""
Adaptive Panel Quadrature
=========================

Vectorized adaptive Gauss-Legendre quadrature for integrands with many components.

Why not scipy.integrate.quad?
-----------------------------
A moment table needs thousands of integrals that share one integrand family
(t^n exp(-2 phi)). quad() evaluates them one at a time through a Python callback. Here
every panel is evaluated for all components at once, and a panel is split when any
component still needs it.

How a panel is judged
---------------------
Each panel is integrated with two Gauss-Legendre rules of orders 2k and k, where 2k is the
quadrature order (20 and 10 by default). The difference |Q_2k - Q_k| is the panel's error
estimate, which is conservative for the order-2k value that is kept.
A panel is bisected while its error share exceeds tol / (number of panels) for some
component; the whole integral is accepted once every component's summed error is within
tol of its scale.

Log-space variant
-----------------
``integrate_log`` receives log f instead of f. Each panel is summed with logsumexp,
which rescales by the panel's largest exponent, so integrands like t^2000 exp(-2 phi)
never overflow or underflow before they are combined.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from ..core.exceptions import ConfigurationError, QuadratureError

logger = logging.getLogger(__name__)

# integrand(x) takes a 1-D array of nodes and returns an array of shape (len(x), M)
Integrand = Callable[[np.ndarray], np.ndarray]


@lru_cache(maxsize=32)
def gauss_legendre_unit(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def graded_breakpoints(a: float, b: float, levels: int = 12, toward: str = "b") -> np.ndarray:
    """
    Breakpoints on [a, b] that halve the panel width toward one end.

    Example:
        graded_breakpoints(0, 1, 3) -> [0, 0.5, 0.75, 0.875, 1]
    """
    if not b > a:
        raise ConfigurationError(f"need b > a, got [{a}, {b}]")
    fractions = 1.0 - 0.5 ** np.arange(levels + 1)
    if toward == "b":
        points = a + (b - a) * fractions
    else:
        points = b - (b - a) * fractions[::-1]
    return np.unique(np.concatenate([[a], points, [b]]))


@dataclass(frozen=True)
class QuadratureResult:
    """
    Result of a linear-space integration.

    Attributes:
        value: Integral estimate per component
        abs_err: Summed panel error estimate per component
        panels: Number of panels in the final partition
    """

    value: np.ndarray
    abs_err: np.ndarray
    panels: int


@dataclass(frozen=True)
class LogQuadratureResult:
    """
    Result of a log-space integration.

    Attributes:
        log_value: log of the integral per component
        rel_err: Relative error estimate per component
        panels: Number of panels in the final partition
    """

    log_value: np.ndarray
    rel_err: np.ndarray
    panels: int


class AdaptivePanelQuadrature:
    """
    Adaptive bisection over Gauss-Legendre panels, vectorized over components.

    Usage:
        quad = AdaptivePanelQuadrature(order=20)

        # integral_0^1 x^n dx for n = 0..9
        result = quad.integrate(lambda x: x[:, None] ** np.arange(10), [0.0, 1.0], tol=1e-12)
    """

    def __init__(self, order: int = 20, max_panels: int = 20000, max_rounds: int = 80) -> None:
        if order < 4 or order % 2:
            raise ConfigurationError(f"quadrature order must be an even number >= 4, got {order}")
        self.order = order
        self.low_order = order // 2
        self.max_panels = max_panels
        self.max_rounds = max_rounds

    # =========================================================================
    # Public API
    # =========================================================================
    def integrate(
        self,
        integrand: Integrand,
        breakpoints: Sequence[float],
        tol: float,
        scale: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    ) -> QuadratureResult:
        """
        Integrate a vector-valued (real or complex) integrand.

        Args:
            integrand: f(x) -> array (len(x), M)
            breakpoints: Initial partition, increasing
            tol: Relative tolerance against ``scale``
            scale: Maps the current totals to a per-component scale; defaults to |total|

        Raises:
            QuadratureError: Panel budget exhausted before convergence
        """
        a, b = self._initial_panels(breakpoints)
        values, errors = self._estimate_linear(integrand, a, b)

        for round_index in range(self.max_rounds):
            total = values.sum(axis=0)
            ref = np.abs(total) if scale is None else np.asarray(scale(total), dtype=float)
            ref = np.where(ref > 0, ref, np.max(ref, initial=0.0) or 1.0)
            total_err = errors.sum(axis=0)
            achieved = float(np.max(total_err / ref))
            if achieved <= tol:
                logger.debug("linear quadrature converged: %d panels, err %.3g", a.size, achieved)
                return QuadratureResult(total, total_err, int(a.size))

            share = errors / ref[None, :]
            refine = np.any(share > tol / a.size, axis=1)
            a, b, values, errors = self._split(a, b, values, errors, refine, achieved, tol)
            new = self._new_mask
            if new.any():
                v_new, e_new = self._estimate_linear(integrand, a[new], b[new])
                values[new] = v_new
                errors[new] = e_new

        raise QuadratureError(
            f"linear quadrature did not converge in {self.max_rounds} rounds",
            achieved=achieved,
            requested=tol,
        )

    def integrate_log(
        self,
        log_integrand: Integrand,
        breakpoints: Sequence[float],
        tol: float,
    ) -> LogQuadratureResult:
        """
        Integrate positive integrands given as log f.

        Args:
            log_integrand: x -> log f(x), array (len(x), M); -inf marks f = 0
            breakpoints: Initial partition, increasing
            tol: Relative tolerance per component

        Raises:
            QuadratureError: Panel budget exhausted before convergence
        """
        a, b = self._initial_panels(breakpoints)
        log_values, rel = self._estimate_log(log_integrand, a, b)

        for round_index in range(self.max_rounds):
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                log_total = logsumexp(log_values, axis=0)
                share = np.exp(log_values - log_total[None, :]) * rel
            share = np.nan_to_num(share, nan=0.0, posinf=np.inf)
            total_rel = share.sum(axis=0)
            achieved = float(np.max(total_rel))
            if achieved <= tol:
                logger.debug("log quadrature converged: %d panels, rel err %.3g", a.size, achieved)
                return LogQuadratureResult(log_total, total_rel, int(a.size))

            refine = np.any(share > tol / a.size, axis=1)
            a, b, log_values, rel = self._split(a, b, log_values, rel, refine, achieved, tol)
            new = self._new_mask
            if new.any():
                lv_new, rel_new = self._estimate_log(log_integrand, a[new], b[new])
                log_values[new] = lv_new
                rel[new] = rel_new

        raise QuadratureError(
            f"log quadrature did not converge in {self.max_rounds} rounds",
            achieved=achieved,
            requested=tol,
        )

    # =========================================================================
    # Panel bookkeeping
    # =========================================================================
    @staticmethod
    def _initial_panels(breakpoints: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        points = np.asarray(breakpoints, dtype=float)
        if points.ndim != 1 or points.size < 2 or np.any(np.diff(points) <= 0):
            raise ConfigurationError("breakpoints must be a strictly increasing sequence of >= 2 points")
        return points[:-1].copy(), points[1:].copy()

    def _split(
        self,
        a: np.ndarray,
        b: np.ndarray,
        values: np.ndarray,
        errors: np.ndarray,
        refine: np.ndarray,
        achieved: float,
        tol: float,
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Bisect flagged panels; new halves are marked in self._new_mask."""
        width = b - a
        splittable = refine & (width > 1e-14 * np.maximum(1.0, np.abs(a)))
        if not splittable.any():
            raise QuadratureError(
                "quadrature panels cannot be refined further", achieved=achieved, requested=tol
            )
        n_panels = a.size + int(splittable.sum())
        if n_panels > self.max_panels:
            raise QuadratureError(
                f"quadrature needs more than {self.max_panels} panels", achieved=achieved, requested=tol
            )

        mid = 0.5 * (a + b)
        keep = ~splittable
        new_a = np.concatenate([a[keep], a[splittable], mid[splittable]])
        new_b = np.concatenate([b[keep], mid[splittable], b[splittable]])
        n_keep = int(keep.sum())
        shape = (new_a.size,) + values.shape[1:]
        new_values = np.zeros(shape, dtype=values.dtype)
        new_errors = np.zeros(shape, dtype=errors.dtype)
        new_values[:n_keep] = values[keep]
        new_errors[:n_keep] = errors[keep]

        order = np.argsort(new_a, kind="stable")
        self._new_mask = (np.arange(new_a.size) >= n_keep)[order]
        logger.debug("quadrature refine: %d -> %d panels (err %.3g)", a.size, new_a.size, achieved)
        return new_a[order], new_b[order], new_values[order], new_errors[order]

    # =========================================================================
    # Panel estimates
    # =========================================================================
    def _rule_points(self, a: np.ndarray, b: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
        nodes, weights = gauss_legendre_unit(order)
        width = (b - a)[:, None]
        x = a[:, None] + width * nodes[None, :]
        w = width * weights[None, :]
        return x, w

    def _evaluate(self, func: Integrand, x: np.ndarray) -> np.ndarray:
        flat = np.asarray(func(x.ravel()))
        if flat.ndim == 1:
            flat = flat[:, None]
        return flat.reshape(x.shape + flat.shape[1:])

    def _estimate_linear(
        self, integrand: Integrand, a: np.ndarray, b: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        x_hi, w_hi = self._rule_points(a, b, self.order)
        x_lo, w_lo = self._rule_points(a, b, self.low_order)
        f_hi = self._evaluate(integrand, x_hi)
        f_lo = self._evaluate(integrand, x_lo)
        q_hi = np.einsum("pk,pkm->pm", w_hi, f_hi)
        q_lo = np.einsum("pk,pkm->pm", w_lo, f_lo)
        return q_hi, np.abs(q_hi - q_lo)

    def _estimate_log(
        self, log_integrand: Integrand, a: np.ndarray, b: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        x_hi, w_hi = self._rule_points(a, b, self.order)
        x_lo, w_lo = self._rule_points(a, b, self.low_order)
        l_hi = self._evaluate(log_integrand, x_hi)
        l_lo = self._evaluate(log_integrand, x_lo)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            q_hi = logsumexp(l_hi + np.log(w_hi)[:, :, None], axis=1)
            q_lo = logsumexp(l_lo + np.log(w_lo)[:, :, None], axis=1)
            rel = np.abs(np.expm1(q_lo - q_hi))
        both_zero = np.isneginf(q_hi) & np.isneginf(q_lo)
        rel = np.where(both_zero, 0.0, rel)
        rel = np.where(np.isneginf(q_hi) & ~both_zero, np.inf, rel)
        return q_hi, np.nan_to_num(rel, nan=np.inf)
