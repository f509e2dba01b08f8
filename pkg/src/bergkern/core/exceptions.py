"""
Error Hierarchy
===============

Every failure the library can report is one of three kinds, and each kind maps to one
process exit code of the CLI:

    ConfigurationError      exit 2   the inputs are wrong (bad spec, bad parameters)
    NumericalAccuracyError  exit 3   the inputs are fine but the requested accuracy
                                     was not reached (quadrature, truncation, conditioning)
    DomainError             exit 4   a point lies outside the region an operation covers

Library code raises these; only the CLI turns them into exit codes.
"""

from typing import Optional


class BergkernError(Exception):
    """Base class for all bergkern errors."""

    exit_code: int = 1


class ConfigurationError(BergkernError, ValueError):
    """Invalid parameters, empty sample sets, unknown config keys, malformed input files."""

    exit_code = 2


class InvalidSpecError(ConfigurationError):
    """A WeightSpec violates its invariants (A = B = 0, alpha <= 0, negative coefficients)."""


class MethodMismatchError(ConfigurationError):
    """A kernel route was requested for a weight it cannot handle."""


class NumericalAccuracyError(BergkernError, ArithmeticError):
    """
    The requested accuracy could not be reached.

    Attributes:
        achieved: Best error bound reached before giving up (None if unknown)
        requested: Tolerance that was asked for (None if not applicable)
    """

    exit_code = 3

    def __init__(
        self,
        message: str,
        achieved: Optional[float] = None,
        requested: Optional[float] = None,
    ) -> None:
        super().__init__(message)
        self.achieved = achieved
        self.requested = requested


class QuadratureError(NumericalAccuracyError):
    """Adaptive quadrature did not converge within its panel budget."""


class TruncationError(NumericalAccuracyError):
    """The moment table is too short for the series tail bound; enlarge N."""


class DivergenceError(NumericalAccuracyError):
    """The series ratio bound q is too close to 1 to bound the tail."""


class ConditioningError(NumericalAccuracyError):
    """The Gram matrix is not numerically positive definite or too ill-conditioned."""


class InsufficientRangeError(NumericalAccuracyError):
    """Not enough far-field samples to fit or compare decay bounds."""


class DomainError(BergkernError, ValueError):
    """A point lies outside the disc, the graph radius, or an admissible sub-disc."""

    exit_code = 4
