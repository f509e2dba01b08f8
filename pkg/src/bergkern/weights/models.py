"""
Weight Data Models
==================

Defines the parametrized weight and the certification report.

The weight is

    phi(z) = 1/2 * ( -A log(1 - |z|^2) + B (1 - |z|^2)^(-alpha) ) + Re g(z),
    g(z)   = sum_k c_k z^k

which covers the three standard families of exponential-type weights:
    - B = 0, g = 0          logarithmic (standard) weight, family "log"
    - B > 0, g = 0          exponential-type weight, family "exp"
    - any of the above + g  harmonic perturbation (is_harmonic is True)
"""

import hashlib
import json
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import numpy.typing as npt

from ..core.exceptions import ConfigurationError, InvalidSpecError


def _canonical_coeffs(coeffs: Iterable[complex]) -> tuple[complex, ...]:
    """
    Normalize harmonic coefficients.

    Im c0 is dropped because h = Re g does not see it, and trailing zeros are stripped,
    so two specs with the same weight have the same coefficients.
    """
    values = [complex(c) for c in coeffs]
    if values:
        values[0] = complex(values[0].real, 0.0)
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class WeightSpec:
    """
    Parametrized weight phi.

    Attributes:
        A: Coefficient of the logarithmic term (>= 0)
        B: Coefficient of the exponential-type term (>= 0)
        alpha: Exponent of (1 - |z|^2)^(-alpha) (> 0)
        harmonic_coeffs: Coefficients c_0..c_d of g; the perturbation is Re g

    At least one of A, B must be positive, otherwise the Laplacian vanishes and
    tau = (Laplacian)^(-1/2) is undefined.
    """

    A: float
    B: float = 0.0
    alpha: float = 1.0
    harmonic_coeffs: tuple[complex, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for name in ("A", "B", "alpha"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise InvalidSpecError(f"{name} must be finite, got {value}")
        if self.A < 0 or self.B < 0:
            raise InvalidSpecError(f"A and B must be nonnegative, got A={self.A}, B={self.B}")
        if self.alpha <= 0:
            raise InvalidSpecError(f"alpha must be positive, got {self.alpha}")
        if self.A == 0 and self.B == 0:
            raise InvalidSpecError("at least one of A, B must be positive (Laplacian vanishes)")
        coeffs = _canonical_coeffs(self.harmonic_coeffs)
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for c in coeffs):
            raise InvalidSpecError("harmonic coefficients must be finite")
        # frozen dataclass: bypass __setattr__ for normalization
        object.__setattr__(self, "A", float(self.A))
        object.__setattr__(self, "B", float(self.B))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "harmonic_coeffs", coeffs)

    # =========================================================================
    # Classification
    # =========================================================================
    @property
    def is_radial(self) -> bool:
        """True iff g is a real constant, i.e. phi depends only on |z|."""
        return len(self.harmonic_coeffs) <= 1

    @property
    def is_harmonic(self) -> bool:
        """True for a non-constant harmonic perturbation."""
        return not self.is_radial

    @property
    def family(self) -> str:
        """'log' when B = 0, 'exp' otherwise."""
        return "log" if self.B == 0 else "exp"

    @property
    def constant_shift(self) -> float:
        """Re c_0, the constant part of the harmonic perturbation."""
        return self.harmonic_coeffs[0].real if self.harmonic_coeffs else 0.0

    def radial_part(self) -> "WeightSpec":
        """The same weight with the non-constant part of g removed."""
        shift = self.harmonic_coeffs[:1]
        return WeightSpec(A=self.A, B=self.B, alpha=self.alpha, harmonic_coeffs=shift)

    def without_harmonic(self) -> "WeightSpec":
        """The same weight with g = 0."""
        return WeightSpec(A=self.A, B=self.B, alpha=self.alpha)

    def g(self, z: npt.ArrayLike) -> np.ndarray:
        """Evaluate the holomorphic perturbation g(z) = sum c_k z^k."""
        z = np.asarray(z, dtype=complex)
        if not self.harmonic_coeffs:
            return np.zeros_like(z)
        return np.polynomial.polynomial.polyval(z, np.array(self.harmonic_coeffs))

    # =========================================================================
    # Serialization
    # =========================================================================
    def to_dict(self) -> dict[str, Any]:
        """JSON form: {"A", "B", "alpha", "g": [[re, im], ...]}."""
        return {
            "A": self.A,
            "B": self.B,
            "alpha": self.alpha,
            "g": [[c.real, c.imag] for c in self.harmonic_coeffs],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "WeightSpec":
        """
        Build a spec from its JSON form.

        Raises:
            ConfigurationError: Unknown keys or malformed coefficient pairs
            InvalidSpecError: Values violate the WeightSpec invariants
        """
        if not isinstance(data, dict):
            raise ConfigurationError("weight spec must be a JSON object")
        unknown = set(data) - {"A", "B", "alpha", "g"}
        if unknown:
            raise ConfigurationError(f"unknown weight spec keys: {sorted(unknown)}")
        if "A" not in data:
            raise ConfigurationError("weight spec requires 'A'")
        pairs = data.get("g", [])
        if not isinstance(pairs, (list, tuple)):
            raise ConfigurationError(f"'g' must be a list of [re, im] pairs, got {pairs!r}")
        try:
            coeffs = []
            for pair in pairs:
                if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                    raise ConfigurationError(f"harmonic coefficient must be [re, im], got {pair!r}")
                coeffs.append(complex(float(pair[0]), float(pair[1])))
            return cls(
                A=float(data["A"]),
                B=float(data.get("B", 0.0)),
                alpha=float(data.get("alpha", 1.0)),
                harmonic_coeffs=tuple(coeffs),
            )
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigurationError):
                raise
            raise ConfigurationError(f"malformed weight spec: {e}") from e

    @property
    def spec_hash(self) -> str:
        """Stable 16-hex-digit identifier of the weight (used as a cache key)."""
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    def describe(self) -> str:
        """Short human-readable label, e.g. 'exp(A=1, B=1, alpha=0.5)'."""
        label = f"{self.family}(A={self.A:g}, B={self.B:g}, alpha={self.alpha:g})"
        if self.is_harmonic:
            label += f" + Re g, deg {len(self.harmonic_coeffs) - 1}"
        return label


@dataclass(frozen=True)
class OPReport:
    """
    Empirical certification of the OP(D) conditions.

    Attributes:
        C1_est: Largest sampled |tau(z) - tau(w)| / |z - w| (Lipschitz condition)
        C2_est: Largest sampled tau(z) / (1 - |z|) (boundary condition)
        C3_found: (C3, a) witness for the growth condition, None when the a-grid search failed
        sample_count: Number of sample points actually used
        r_max: Sampling cap on |z|
        margin: Acceptance margin, a witness needs C3 < 1 - margin
        a_scan: Every (a, C3) pair tried, in grid order (C3 None if no admissible pair)
        diagnostics: Warnings about degenerate input
    """

    C1_est: float
    C2_est: float
    C3_found: Optional[tuple[float, float]]
    sample_count: int
    r_max: float
    margin: float = 0.01
    a_scan: tuple[tuple[float, Optional[float]], ...] = ()
    diagnostics: tuple[str, ...] = ()

    @property
    def certified(self) -> bool:
        """True when a (C3, a) witness was found."""
        return self.C3_found is not None

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON output."""
        return {
            "C1_est": self.C1_est,
            "C2_est": self.C2_est,
            "C3_found": (
                {"C3": self.C3_found[0], "a": self.C3_found[1]} if self.C3_found else None
            ),
            "sample_count": self.sample_count,
            "r_max": self.r_max,
            "margin": self.margin,
            "a_scan": [{"a": a, "C3": c3} for a, c3 in self.a_scan],
            "diagnostics": list(self.diagnostics),
        }
