"""
Run Configuration
=================

One JSON document describes a run. Every section is optional; missing values fall back to
Settings, and command-line flags override both.

    {
      "spec":   {"A": 1.0, "B": 1.0, "alpha": 0.5, "g": [[0.0, 0.0], [0.3, 0.2]]}
                or "path/to/spec.json",
      "kernel": {"method": "auto", "N": 2000, "tol": 1e-10, "r_quad": 0.9},
      "metric": {"h": 0.01, "r_max": 0.9, "stencil": "auto"},
      "decay":  {"strategy": "rays", "count": 500, "seed": 0, "bin_width": 0.25,
                 "slack": null, "alpha": 0.25, "beta": 0.5, "k_list": [1, 2, 4]},
      "z": [0.1, 0.2], "w": [0.3, -0.1],
      "output_dir": "./data/runs/exp"
    }

Unknown keys anywhere are rejected. Every loading error is a ConfigurationError, so a bad
config exits with status 2 before any file is written.
"""

import json
from pathlib import Path
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..core.exceptions import ConfigurationError
from ..weights.models import WeightSpec


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class KernelParams(_Section):
    method: str = "auto"
    N: Optional[int] = Field(default=None, ge=0, le=20000)
    tol: Optional[float] = Field(default=None, gt=0.0, lt=1e-2)
    r_quad: Optional[float] = Field(default=None, gt=0.0, lt=1.0)


class MetricParams(_Section):
    h: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    r_max: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    stencil: Optional[Literal["auto", "8", "16"]] = None


class DecayParams(_Section):
    strategy: Optional[Literal["rays", "random"]] = None
    count: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None
    bin_width: Optional[float] = Field(default=None, gt=0.0)
    slack: Optional[float] = Field(default=None, ge=0.0)
    fit_min_distance: Optional[float] = Field(default=None, ge=0.0)
    alpha: Optional[float] = Field(default=None, gt=0.0, le=0.5)
    beta: Optional[float] = Field(default=None, gt=0.0)
    k_list: list[int] = Field(default_factory=list)

    @field_validator("k_list")
    @classmethod
    def validate_k_list(cls, v: list[int]) -> list[int]:
        if any(k <= 0 for k in v):
            raise ValueError("k_list entries must be positive integers")
        return v


class RunConfig(_Section):
    """
    Validated run configuration.

    Attributes:
        spec: Inline weight spec (JSON form) or path to a spec file
        kernel, metric, decay: Per-module parameters
        z, w: Query points as [re, im]
        output_dir: Artifact directory (Settings.output_dir when None)
    """

    spec: Optional[Union[dict[str, Any], str]] = None
    kernel: KernelParams = Field(default_factory=KernelParams)
    metric: MetricParams = Field(default_factory=MetricParams)
    decay: DecayParams = Field(default_factory=DecayParams)
    z: Optional[tuple[float, float]] = None
    w: Optional[tuple[float, float]] = None
    output_dir: Optional[str] = None

    def weight_spec(self, base_dir: Optional[Path] = None) -> WeightSpec:
        """
        Resolve the spec reference.

        Raises:
            ConfigurationError: Missing spec, unreadable spec file or malformed JSON
            InvalidSpecError: Spec values violate the weight invariants
        """
        if self.spec is None:
            raise ConfigurationError("no weight spec given (use --spec or the 'spec' key)")
        if isinstance(self.spec, dict):
            return WeightSpec.from_dict(self.spec)
        path = Path(self.spec)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return WeightSpec.from_dict(read_json(path))

    @staticmethod
    def point(pair: Optional[tuple[float, float]], name: str) -> complex:
        if pair is None:
            raise ConfigurationError(f"point '{name}' is required")
        return complex(pair[0], pair[1])


def read_json(path: Union[str, Path]) -> Any:
    """Parse a JSON file; every failure is a ConfigurationError."""
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigurationError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"malformed JSON in {path}: {e}") from e


def parse_spec_argument(text: str) -> Union[dict[str, Any], str]:
    """--spec accepts inline JSON ('{...}') or a file path."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"malformed inline spec: {e}") from e
    return text


def parse_point(text: str) -> tuple[float, float]:
    """'a,b' -> (a, b)."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigurationError(f"point must be 're,im', got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as e:
        raise ConfigurationError(f"point must be 're,im', got {text!r}") from e


def _merge(base: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def build_run_config(
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[dict[str, Any]] = None,
) -> RunConfig:
    """
    Load the config file (if any) and apply flag overrides.

    Raises:
        ConfigurationError: Unreadable file, malformed JSON, unknown keys or out-of-range values
    """
    data: dict[str, Any] = {}
    if config_path is not None:
        loaded = read_json(config_path)
        if not isinstance(loaded, dict):
            raise ConfigurationError(f"config {config_path} must be a JSON object")
        data = loaded
    data = _merge(data, overrides or {})
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid run config: {e}") from e
