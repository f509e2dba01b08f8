"""
bergkern Core Settings

This module uses Pydantic Settings to load and validate configuration from environment
variables. Every numerical default of the library lives here, grouped by the module that
consumes it:
1. Type and range validation at startup (fail fast if config is wrong)
2. Default values with clear documentation
3. Easy testing by overriding settings

Library functions never read settings on their own. They take explicit parameters, and
the CLI and the kernel factory fill those parameters from a Settings instance.
"""

import json
from functools import lru_cache
from typing import Any, Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables.

    The settings are loaded in this order (later overrides earlier):
    1. Default values defined here
    2. .env file
    3. Environment variables prefixed with BERGKERN_

    Example:
        BERGKERN_THREADS=4 BERGKERN_LOG_LEVEL=DEBUG bergkern decay-report ...
    """

    model_config = SettingsConfigDict(
        env_prefix="BERGKERN_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",  # Ignore extra env vars that aren't defined here
    )

    # =========================================================================
    # Application Settings
    # =========================================================================
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    threads: int = Field(default=1, ge=1, le=256, description="Worker threads for pair evaluation")
    cache_dir: str = "./data/cache"
    output_dir: str = "./data/runs"

    # =========================================================================
    # Weights: OP(D) certification
    # =========================================================================
    op_r_max: float = Field(default=0.99, gt=0.0, lt=1.0)
    op_samples: int = Field(default=1024, ge=1, le=4096)
    op_a_grid: list[float] = Field(default=[0.5, 1.0, 2.0, 4.0, 8.0])
    op_margin: float = Field(default=0.01, ge=0.0, lt=1.0)
    fd_step: float = Field(default=1e-4, gt=0.0, lt=1e-1)

    @field_validator("op_a_grid", mode="before")
    @classmethod
    def parse_a_grid(cls, v: Any) -> Any:
        """Parse the a-grid of the C3 search from a JSON list or comma-separated string."""
        if isinstance(v, str):
            try:
                return json.loads(v)
            except json.JSONDecodeError:
                return [float(item.strip()) for item in v.split(",") if item.strip()]
        return v

    @field_validator("op_a_grid")
    @classmethod
    def validate_a_grid(cls, v: list[float]) -> list[float]:
        if not v or any(a <= 0 for a in v):
            raise ValueError("op_a_grid must be a non-empty list of positive numbers")
        return v

    # =========================================================================
    # Kernel
    # =========================================================================
    moment_terms: int = Field(default=2000, ge=0, le=20000)
    moment_tol: float = Field(default=1e-10, gt=0.0, lt=1e-2)
    series_ratio_window: int = Field(default=5, ge=1, le=50)
    series_divergence_margin: float = Field(default=1e-3, gt=0.0, lt=0.5)
    gram_terms: int = Field(default=40, ge=0, le=60)
    gram_max_terms: int = Field(default=60, ge=1, le=60)
    gram_quad_tol: float = Field(default=1e-12, gt=0.0, lt=1e-3)
    gram_condition_limit: float = Field(default=1e12, gt=1.0)
    gram_r_quad: float = Field(default=0.9, gt=0.0, lt=1.0)
    quad_order: int = Field(default=20, ge=4, le=200, multiple_of=2)
    quad_max_panels: int = Field(default=20000, ge=16)

    # =========================================================================
    # Metric
    # =========================================================================
    h: float = Field(default=0.01, gt=0.0, lt=1.0, description="Target edge length of the metric graph")
    r_max_log: float = Field(default=0.95, gt=0.0, lt=1.0, description="Graph radius for logarithmic weights")
    r_max_exp: float = Field(default=0.9, gt=0.0, lt=1.0, description="Graph radius for exponential-type weights")
    max_rings: int = Field(default=20000, ge=2)
    stencil: Literal["auto", "8", "16"] = Field(default="auto", description="Graph stencil; auto widens it as h shrinks")

    # =========================================================================
    # Decay
    # =========================================================================
    bin_width: float = Field(default=0.25, gt=0.0)
    fit_min_distance: float = Field(default=1.0, ge=0.0)
    slack_factor: float = Field(default=3.0, ge=0.0)
    near_diag_alpha: float = Field(default=0.25, gt=0.0, le=0.5)
    mean_value_beta: float = Field(default=0.5, gt=0.0)
    mean_value_quad_n: int = Field(default=24, ge=4, le=400)
    sample_count: int = Field(default=500, ge=1)
    sample_seed: int = 0
    strategy: Literal["rays", "random"] = "rays"

    # =========================================================================
    # Computed Properties
    # =========================================================================
    def default_r_max(self, family: str) -> float:
        """Graph radius for a weight family ("log" or "exp")."""
        return self.r_max_exp if family == "exp" else self.r_max_log


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance.

    In tests, you can clear the cache with: get_settings.cache_clear()
    """
    return Settings()
