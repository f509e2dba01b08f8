"""Core settings, error hierarchy and logging setup."""

from .config import Settings, get_settings
from .exceptions import (
    BergkernError,
    ConditioningError,
    ConfigurationError,
    DivergenceError,
    DomainError,
    InsufficientRangeError,
    InvalidSpecError,
    MethodMismatchError,
    NumericalAccuracyError,
    QuadratureError,
    TruncationError,
)
from .logging import configure_logging

__all__ = [
    "Settings",
    "get_settings",
    "configure_logging",
    "BergkernError",
    "ConfigurationError",
    "InvalidSpecError",
    "MethodMismatchError",
    "NumericalAccuracyError",
    "QuadratureError",
    "TruncationError",
    "DivergenceError",
    "ConditioningError",
    "InsufficientRangeError",
    "DomainError",
]
