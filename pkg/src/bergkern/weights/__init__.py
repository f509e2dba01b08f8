"""
Weights Package
===============

The weight families, their closed-form Laplacian and radius function tau, and the
empirical OP(D) certification.

Usage:
    from bergkern.weights import WeightSpec, eval_tau, check_op_conditions

    spec = WeightSpec(A=1.0, B=1.0, alpha=0.5)
    tau0 = float(eval_tau(spec, 0.0))
    report = check_op_conditions(spec, r_max=0.99)
"""

from .certify import check_op_conditions, sample_points
from .functions import eval_laplacian, eval_log_tau, eval_phi, eval_tau, fd_laplacian
from .models import OPReport, WeightSpec

__all__ = [
    "WeightSpec",
    "OPReport",
    "eval_phi",
    "eval_laplacian",
    "eval_tau",
    "eval_log_tau",
    "fd_laplacian",
    "check_op_conditions",
    "sample_points",
]
