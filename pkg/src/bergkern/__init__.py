"""
bergkern - weighted Bergman kernels on the unit disc.

Computes Bergman kernels for exponential-type weights, certifies the
Oleinik-Perel'man conditions on the weight, measures the geodesic distance
of the metric tau^-2 dz dzbar and checks the off-diagonal decay estimate
against analytic oracles.
"""

__version__ = "0.1.0"
