"""
CLI Package
===========

The `bergkern` console script and its JSON run configuration.

Usage:
    bergkern kernel --spec '{"A": 1, "B": 1, "alpha": 0.5}' --z 0.1,0.2 --w 0.3,0
    bergkern oracle-test --out ./data/runs/oracles
"""

from .config import RunConfig, build_run_config
from .main import main
from .oracles import OracleResult, run_oracle_suite

__all__ = ["RunConfig", "build_run_config", "main", "OracleResult", "run_oracle_suite"]
