"""
Gram Matrix Kernel
==================

For a weight with a harmonic perturbation the monomials are no longer orthogonal. The
kernel of the span of 1, z, ..., z^N is

    K_N(z, w) = v(w)^H G^(-1) v(z),      v(z) = (1, z, ..., z^N)
    G[m][n]   = integral_D  zeta^m conj(zeta)^n exp(-2 phi(zeta)) dlambda(zeta)

and K_N increases to K as N grows.

Building G
----------
In polar coordinates zeta = r e^(i theta) the entry splits into a radial integral of an
angular Fourier coefficient:

    G[m][n] = 2 pi integral_0^1 r^(m+n+1) exp(-2 phi_rad(r)) h_(n-m)(r) dr
    h_k(r)  = (1 / 2 pi) integral exp(-2 Re g(r e^(i theta))) e^(-i k theta) dtheta

h_k(r) comes from one FFT of exp(-2 Re g) on n_theta >= max(4 (N + 1), 64) equispaced
angles; every (m, n) entry then reads its coefficient by index. The radial integral runs
through AdaptivePanelQuadrature with the error of entry (m, n) measured against
sqrt(G[m][m] G[n][n]).

Solving
-------
G is Jacobi-scaled to unit diagonal, factored by Cholesky, and the kernel is evaluated as
vdot(y_w, y_z) with y = L^(-1) D v. The condition number of the scaled matrix enters the
error estimate and is capped by condition_limit.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy import linalg

from ..core.exceptions import ConditioningError, ConfigurationError, DomainError
from ..weights.models import WeightSpec
from .base import BaseKernel
from .models import KernelValue
from .moments import radial_log_density
from .quadrature import AdaptivePanelQuadrature, graded_breakpoints

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


def angular_node_count(N: int) -> int:
    """Angular FFT size: at least 4 (N + 1) and 64, rounded up to a power of two."""
    return 1 << math.ceil(math.log2(max(4 * (N + 1), 64)))


def build_gram_matrix(
    spec: WeightSpec,
    N: int,
    quad_tol: float = 1e-12,
    order: int = 20,
    max_panels: int = 20000,
) -> np.ndarray:
    """
    Hermitian Gram matrix of the monomials 1..z^N for ``spec``.

    Raises:
        ConfigurationError: If N < 0
        QuadratureError: If the radial integrals do not converge
    """
    if N < 0:
        raise ConfigurationError(f"N must be >= 0, got {N}")

    size = N + 1
    n_theta = angular_node_count(N)
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    unit = np.exp(1j * theta)
    radial = spec.without_harmonic()

    m_idx, n_idx = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    powers = (m_idx + n_idx + 1).ravel()
    freq = ((n_idx - m_idx) % n_theta).ravel()

    def integrand(r: np.ndarray) -> np.ndarray:
        log_rad = radial_log_density(radial, r**2)
        if spec.harmonic_coeffs:
            samples = np.exp(-2.0 * np.real(spec.g(r[:, None] * unit[None, :])))
            coeffs = np.fft.fft(samples, axis=1) / n_theta
            # fft uses e^(-i k theta), so column k holds h_k
            angular = coeffs[:, freq]
        else:
            angular = np.zeros((r.size, powers.size), dtype=complex)
            angular[:, freq == 0] = 1.0
        with np.errstate(divide="ignore"):
            log_r = np.log(r)
        radial_part = np.exp(log_r[:, None] * powers[None, :] + log_rad[:, None])
        return 2.0 * math.pi * radial_part * angular

    diag_flat = np.arange(size) * (size + 1)

    def entry_scale(total: np.ndarray) -> np.ndarray:
        diag = np.abs(total[diag_flat].real)
        return np.sqrt(np.outer(diag, diag)).ravel()

    quad = AdaptivePanelQuadrature(order=order, max_panels=max_panels)
    result = quad.integrate(integrand, graded_breakpoints(0.0, 1.0, levels=12), quad_tol, scale=entry_scale)

    G = result.value.reshape(size, size)
    G = 0.5 * (G + G.conj().T)
    logger.debug("Gram matrix %s: N=%d, %d panels, n_theta=%d", spec.describe(), N, result.panels, n_theta)
    return G


def _cholesky_scaled(G: np.ndarray, condition_limit: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Jacobi scaling + Cholesky; returns (L, d, kappa) with G = D^-1 L L^H D^-1, D = diag(d)."""
    diag = G.diagonal().real
    if np.any(diag <= 0):
        raise ConditioningError("Gram matrix has a non-positive diagonal")
    d = 1.0 / np.sqrt(diag)
    scaled = G * np.outer(d, d)

    eigenvalues = np.linalg.eigvalsh(scaled)
    if eigenvalues[0] <= 0:
        raise ConditioningError(
            f"Gram matrix is not positive definite (min eigenvalue {eigenvalues[0]:.3g}); reduce N",
            achieved=math.inf,
            requested=condition_limit,
        )
    kappa = float(eigenvalues[-1] / eigenvalues[0])
    if kappa > condition_limit:
        raise ConditioningError(
            f"Gram matrix condition number {kappa:.3g} exceeds {condition_limit:.3g}; reduce N",
            achieved=kappa,
            requested=condition_limit,
        )
    try:
        L = linalg.cholesky(scaled, lower=True)
    except linalg.LinAlgError as e:
        raise ConditioningError(f"Cholesky factorization failed: {e}", achieved=kappa) from e
    return L, d, kappa


class GramKernel(BaseKernel):
    """
    Truncated-basis kernel from the Gram matrix of 1, z, ..., z^N.

    G is assembled and factored once in the constructor; evaluate() costs two
    triangular solves.

    Usage:
        kernel = GramKernel(WeightSpec(A=1.0, harmonic_coeffs=(0, 0.3 + 0.2j)), N=40)
        kv = kernel.evaluate(0.2, -0.1j)
    """

    METHOD = "gram"

    def __init__(
        self,
        spec: WeightSpec,
        N: int = 40,
        r_quad: float = 0.9,
        quad_tol: float = 1e-12,
        condition_limit: float = 1e12,
        max_terms: int = 60,
        **quad_options: int,
    ) -> None:
        super().__init__(spec)
        if not 0 <= N <= max_terms:
            raise ConfigurationError(f"Gram N must lie in [0, {max_terms}], got {N}")
        if not 0.0 < r_quad < 1.0:
            raise ConfigurationError(f"r_quad must lie in (0, 1), got {r_quad}")
        self.N = N
        self.r_quad = r_quad
        self.quad_tol = quad_tol
        self.gram = build_gram_matrix(spec, N, quad_tol, **quad_options)
        self._L, self._d, self.condition = _cholesky_scaled(self.gram, condition_limit)
        logger.info("Gram kernel %s: N=%d, kappa=%.3g", spec.describe(), N, self.condition)

    @classmethod
    def supports(cls, spec: WeightSpec) -> bool:
        return True

    def _coefficients(self, z: complex) -> np.ndarray:
        v = np.power(complex(z), np.arange(self.N + 1))
        return linalg.solve_triangular(self._L, self._d * v, lower=True)

    def evaluate(self, z: complex, w: complex) -> KernelValue:
        for name, point in (("z", z), ("w", w)):
            if abs(complex(point)) > self.r_quad:
                raise DomainError(f"|{name}| = {abs(complex(point)):.6g} exceeds r_quad = {self.r_quad:g}")
        y_z = self._coefficients(z)
        y_w = self._coefficients(w)
        value = complex(np.vdot(y_w, y_z))
        if value == 0:
            raise ConditioningError("Gram kernel evaluated to zero")

        last = abs(y_z[-1] * np.conj(y_w[-1]))
        truncation = last / abs(value) / (1.0 - self.r_quad**2)
        err_rel = self.condition * (_EPS + self.quad_tol) + truncation
        return KernelValue.from_complex(value, "gram", err_rel=err_rel, terms=self.N + 1)

    def coefficient_vector(self, z: complex) -> np.ndarray:
        """Coordinates L^(-1) D v(z) of K_N(., z) in the orthonormalized basis."""
        return self._coefficients(z)


def kernel_gram(
    spec: WeightSpec,
    N: int,
    z: complex,
    w: complex,
    r_quad: float = 0.9,
    quad_tol: float = 1e-12,
    condition_limit: float = 1e12,
    kernel: Optional[GramKernel] = None,
) -> KernelValue:
    """
    One-shot Gram kernel evaluation (builds and factors G unless ``kernel`` is given).

    Raises:
        DomainError: |z| or |w| > r_quad
        ConditioningError: G not numerically positive definite or kappa > condition_limit
        QuadratureError: Radial integrals did not converge
    """
    if kernel is None:
        kernel = GramKernel(spec, N, r_quad=r_quad, quad_tol=quad_tol, condition_limit=condition_limit)
    return kernel.evaluate(z, w)
