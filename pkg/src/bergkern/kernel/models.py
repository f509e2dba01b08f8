"""
Kernel Data Models
==================

MomentTable
-----------
Squared norms m_n = ||z^n||^2 of the monomials for a radial weight. In the variable
t = |z|^2 the norm reads

    m_n = pi * integral_0^1 t^n exp(-2 phi(sqrt t)) dt

The table stores log m_n because for exponential-type weights the moments span hundreds
of orders of magnitude across n.

KernelValue
-----------
One kernel evaluation K(z, w) stored as (log |K|, arg K). The diagonal kernel of an
exponential-type weight grows like exp(2 phi) / tau^2 and overflows double precision
near the boundary long before the normalized quantity of the decay estimate does.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal, Union

import numpy as np

from ..core.exceptions import ConfigurationError
from ..utils.files import atomic_write_text, dumps_json

KernelMethod = Literal["series", "closed_form", "gram"]


def wrap_phase(phase: float) -> float:
    """Map an angle to (-pi, pi]."""
    wrapped = math.remainder(phase, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


@dataclass(frozen=True)
class KernelValue:
    """
    A kernel value in log-magnitude + phase form.

    Attributes:
        log_mag: log |K(z, w)|
        phase: arg K(z, w) in (-pi, pi]
        method: Route that produced the value (series, closed_form, gram)
        err_rel: Bound on the relative error (truncation + quadrature or conditioning)
        terms: Number of series terms or basis functions used (0 for closed form)
    """

    log_mag: float
    phase: float
    method: KernelMethod
    err_rel: float = 0.0
    terms: int = 0

    def __post_init__(self) -> None:
        if not math.isfinite(self.log_mag):
            raise ValueError(f"log_mag must be finite, got {self.log_mag}")
        if self.err_rel < 0:
            raise ValueError(f"err_rel must be nonnegative, got {self.err_rel}")
        object.__setattr__(self, "phase", wrap_phase(float(self.phase)))

    @classmethod
    def from_complex(cls, value: complex, method: KernelMethod, err_rel: float = 0.0, terms: int = 0) -> "KernelValue":
        """Build from an ordinary complex number (must be nonzero)."""
        return cls(
            log_mag=math.log(abs(value)),
            phase=math.atan2(value.imag, value.real),
            method=method,
            err_rel=err_rel,
            terms=terms,
        )

    @property
    def magnitude(self) -> float:
        """|K|, may overflow to inf for extreme weights."""
        return math.exp(self.log_mag) if self.log_mag < 709.0 else math.inf

    @property
    def value(self) -> complex:
        """K as a complex number (only safe when log_mag is moderate)."""
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))

    def conjugate(self) -> "KernelValue":
        """The value of K(w, z) given K(z, w)."""
        return KernelValue(self.log_mag, -self.phase, self.method, self.err_rel, self.terms)

    def twisted(self, log_factor: float, phase_shift: float) -> "KernelValue":
        """Multiply by exp(log_factor + i phase_shift)."""
        return KernelValue(
            self.log_mag + log_factor, self.phase + phase_shift, self.method, self.err_rel, self.terms
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON output."""
        return {
            "log_mag": self.log_mag,
            "phase": self.phase,
            "method": self.method,
            "err_rel": self.err_rel,
            "terms": self.terms,
        }


@dataclass(frozen=True)
class MomentTable:
    """
    Log-scale monomial norms of a radial weight.

    Attributes:
        log_m: log m_n for n = 0..N
        quad_err: Absolute quadrature error estimate per entry
        rel_err: quad_err[n] / m_n, kept separately so it never overflows
        spec_hash: Identifier of the generating WeightSpec
        N: Highest degree in the table
        tol: Requested relative quadrature tolerance
    """

    log_m: np.ndarray
    quad_err: np.ndarray
    rel_err: np.ndarray
    spec_hash: str
    N: int
    tol: float
    panels: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        log_m = np.array(self.log_m, dtype=float)
        if log_m.shape != (self.N + 1,):
            raise ValueError(f"log_m must have N + 1 = {self.N + 1} entries, got {log_m.shape}")
        for name, arr in (("log_m", log_m), ("quad_err", self.quad_err), ("rel_err", self.rel_err)):
            values = np.array(arr, dtype=float)
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    @property
    def moments(self) -> np.ndarray:
        """m_n itself (may underflow for exponential-type weights)."""
        return np.exp(self.log_m)

    @property
    def log_ratios(self) -> np.ndarray:
        """log(m_n / m_{n+1}) for n = 0..N-1."""
        return self.log_m[:-1] - self.log_m[1:]

    # =========================================================================
    # Persistence
    # =========================================================================
    def to_dict(self) -> dict[str, Any]:
        """JSON form: spec hash, N, tol and [n, log_m, quad_err] triplets."""
        return {
            "spec_hash": self.spec_hash,
            "N": self.N,
            "tol": self.tol,
            "entries": [
                [n, float(self.log_m[n]), float(self.quad_err[n]), float(self.rel_err[n])]
                for n in range(self.N + 1)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MomentTable":
        try:
            entries = data["entries"]
            n_max = int(data["N"])
            log_m = np.array([row[1] for row in entries], dtype=float)
            quad_err = np.array([row[2] for row in entries], dtype=float)
            if entries and len(entries[0]) > 3:
                rel_err = np.array([row[3] for row in entries], dtype=float)
            else:
                rel_err = quad_err * np.exp(-log_m)
            return cls(
                log_m=log_m,
                quad_err=quad_err,
                rel_err=rel_err,
                spec_hash=str(data["spec_hash"]),
                N=n_max,
                tol=float(data["tol"]),
            )
        except (KeyError, IndexError, TypeError, ValueError) as e:
            raise ConfigurationError(f"malformed moment table: {e}") from e

    def save(self, path: Union[str, Path]) -> Path:
        """Write the table as JSON (atomically)."""
        return atomic_write_text(path, dumps_json(self.to_dict()))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "MomentTable":
        """Read a table written by save()."""
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"moment table {path} is not valid JSON: {e}") from e
        return cls.from_dict(data)
