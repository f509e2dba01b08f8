"""
Kernel Package
==============

Bergman kernels K(z, w) of A^2(exp(-2 phi) dlambda) by three independent routes:

    - moment series for radial weights      (series.py, moments.py)
    - closed form for the standard weight    (closed_form.py)
    - Gram matrix of the monomials           (gram.py)

plus the gauge twist that carries radial kernels to harmonic perturbations.

Usage:
    from bergkern.kernel import KernelFactory, compute_moments, kernel_series

    table = compute_moments(spec, N=2000, tol=1e-10)
    kv = kernel_series(table, 0.5, 0.5, tol=1e-10)

    kernel = KernelFactory.create(spec, "gram", N=40)
"""

from .base import BaseKernel
from .checks import hermitian_defect, kernel_matrix, min_eigenvalue_ratio, reproducing_check
from .closed_form import ClosedFormKernel, kernel_closed_form
from .factory import KERNEL_REGISTRY, KernelFactory
from .gauge import GaugeTwistedKernel, gauge_factor
from .gram import GramKernel, build_gram_matrix, kernel_gram
from .models import KernelValue, MomentTable, wrap_phase
from .moments import compute_moments, load_or_compute_moments
from .quadrature import AdaptivePanelQuadrature
from .series import SeriesKernel, kernel_series

__all__ = [
    "BaseKernel",
    "KernelValue",
    "MomentTable",
    "wrap_phase",
    "AdaptivePanelQuadrature",
    "compute_moments",
    "load_or_compute_moments",
    "kernel_series",
    "SeriesKernel",
    "kernel_closed_form",
    "ClosedFormKernel",
    "kernel_gram",
    "build_gram_matrix",
    "GramKernel",
    "gauge_factor",
    "GaugeTwistedKernel",
    "KERNEL_REGISTRY",
    "KernelFactory",
    "hermitian_defect",
    "kernel_matrix",
    "min_eigenvalue_ratio",
    "reproducing_check",
]
