"""
bergkern Command Line
=====================

    bergkern check-op     --spec SPEC
    bergkern kernel       --spec SPEC --z a,b --w c,d [--method auto|series|gram|closed]
    bergkern distance     --spec SPEC --z a,b --w c,d [--h H] [--rmax R]
    bergkern decay-report --spec SPEC [--count N] [--seed S] [--k-list 1,2,4]
    bergkern oracle-test  [--only NAME ...]

Every subcommand takes --config FILE (a RunConfig JSON document), --out DIR and
--log-level. Flags override config keys, config keys override Settings.

Exit codes:
    0   success
    2   configuration error (bad flags, malformed config, invalid spec)
    3   requested accuracy not reached, or an oracle outside its tolerance
    4   a point outside the admissible domain

Artifacts are computed completely before anything is written, and every file is written
atomically, so a failing run leaves no output behind.
"""

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional

from .. import __version__
from ..core.config import Settings, get_settings
from ..core.exceptions import BergkernError, NumericalAccuracyError
from ..core.logging import configure_logging
from ..decay.checks import (
    cauchy_schwarz_violations,
    mean_value_check,
    metric_comparison_violations,
    near_diagonal_check,
)
from ..decay.export import write_decay_outputs
from ..decay.fitting import compare_bounds, fit_decay
from ..decay.normalize import normalized_kernel
from ..decay.sampling import sample_pairs
from ..kernel.base import BaseKernel
from ..kernel.checks import kernel_matrix, min_eigenvalue_ratio
from ..kernel.factory import KernelFactory
from ..metric.graph import distance_estimate, load_or_build_graph
from ..metric.models import MetricGraph
from ..metric.oracles import dtau, hyperbolic_distance
from ..utils.files import atomic_write_text, dumps_json
from ..weights.certify import check_op_conditions
from ..weights.models import OPReport, WeightSpec
from .config import RunConfig, build_run_config, parse_point, parse_spec_argument
from .oracles import ORACLES, run_oracle_suite

logger = logging.getLogger("bergkern.cli")

MEAN_VALUE_POINTS = (0.0, 0.5)
NEAR_DIAGONAL_SAMPLES = 200
PSD_POINTS = 6


# =============================================================================
# Argument parsing
# =============================================================================
def _csv_ints(text: str) -> list[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bergkern",
        description="Weighted Bergman kernels on the unit disc: kernels, metric distance, decay reports.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="RunConfig JSON file")
    common.add_argument("--spec", help="Weight spec: inline JSON or path to a JSON file")
    common.add_argument("--out", help="Output directory (default: Settings.output_dir)")
    common.add_argument(
        "--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], help="Log level"
    )
    common.add_argument("--threads", type=int, help="Worker threads (default: BERGKERN_THREADS)")

    points = argparse.ArgumentParser(add_help=False)
    points.add_argument("--z", help="First point as 're,im'")
    points.add_argument("--w", help="Second point as 're,im'")

    kernel_opts = argparse.ArgumentParser(add_help=False)
    kernel_opts.add_argument("--method", help="auto, series, gram or closed")
    kernel_opts.add_argument("--N", type=int, dest="N", help="Moment table length or Gram basis size")
    kernel_opts.add_argument("--tol", type=float, help="Series tolerance")
    kernel_opts.add_argument("--r-quad", type=float, dest="r_quad", help="Gram evaluation radius")

    metric_opts = argparse.ArgumentParser(add_help=False)
    metric_opts.add_argument("--h", type=float, help="Target edge length of the metric graph")
    metric_opts.add_argument("--rmax", type=float, dest="r_max", help="Graph radius")
    metric_opts.add_argument("--stencil", choices=["auto", "8", "16"], help="Neighbour stencil (auto widens it as h shrinks)")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check-op", parents=[common], help="Certify the OP(D) conditions empirically")
    sub.add_parser("kernel", parents=[common, points, kernel_opts], help="Evaluate K(z, w)")
    sub.add_parser("distance", parents=[common, points, metric_opts], help="Approximate d_phi(z, w)")

    decay = sub.add_parser(
        "decay-report", parents=[common, kernel_opts, metric_opts], help="Fit the off-diagonal decay envelope"
    )
    decay.add_argument("--strategy", choices=["rays", "random"])
    decay.add_argument("--count", type=int)
    decay.add_argument("--seed", type=int)
    decay.add_argument("--bin-width", type=float, dest="bin_width")
    decay.add_argument("--slack", type=float)
    decay.add_argument("--alpha", type=float, help="Near-diagonal radius factor")
    decay.add_argument("--beta", type=float, help="Mean-value disc factor")
    decay.add_argument("--k-list", type=_csv_ints, dest="k_list", help="Polynomial exponents, e.g. 1,2,4")

    oracle = sub.add_parser("oracle-test", parents=[common], help="Run the analytic oracle suite")
    oracle.add_argument("--only", nargs="+", choices=sorted(ORACLES), help="Run only these oracles")
    return parser


def collect_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Flags that were given, arranged like the RunConfig document."""
    values = vars(args)

    def pick(*names: str) -> dict[str, Any]:
        return {n: values[n] for n in names if values.get(n) is not None}

    overrides: dict[str, Any] = {}
    if values.get("spec") is not None:
        overrides["spec"] = parse_spec_argument(values["spec"])
    for name in ("z", "w"):
        if values.get(name) is not None:
            overrides[name] = parse_point(values[name])
    if values.get("out") is not None:
        overrides["output_dir"] = values["out"]

    sections = {
        "kernel": pick("method", "N", "tol", "r_quad"),
        "metric": pick("h", "r_max", "stencil"),
        "decay": pick("strategy", "count", "seed", "bin_width", "slack", "alpha", "beta", "k_list"),
    }
    overrides.update({key: section for key, section in sections.items() if section})
    return overrides


# =============================================================================
# Shared helpers
# =============================================================================
class RunContext:
    """Resolved config, settings and spec of one invocation."""

    def __init__(self, config: RunConfig, settings: Settings, spec_base: Optional[Path]) -> None:
        self.config = config
        self.settings = settings
        self.spec_base = spec_base

    @property
    def out_dir(self) -> Path:
        return Path(self.config.output_dir or self.settings.output_dir)

    @property
    def cache_dir(self) -> Optional[str]:
        return self.settings.cache_dir or None

    def spec(self) -> WeightSpec:
        return self.config.weight_spec(self.spec_base)

    def kernel(self, spec: WeightSpec) -> BaseKernel:
        params = self.config.kernel
        method = KernelFactory.normalize_method(params.method)
        if method == "auto":
            method = KernelFactory.resolve_auto(spec)
        overrides: dict[str, Any] = {}
        if method in ("series", "gram") and params.N is not None:
            overrides["N"] = params.N
        if method == "series":
            if params.tol is not None:
                overrides["tol"] = params.tol
            overrides["cache_dir"] = self.cache_dir
        if method == "gram" and params.r_quad is not None:
            overrides["r_quad"] = params.r_quad
        return KernelFactory.create(spec, method, self.settings, **overrides)

    def graph(self, spec: WeightSpec) -> MetricGraph:
        params = self.config.metric
        return load_or_build_graph(
            spec,
            r_max=params.r_max if params.r_max is not None else self.settings.default_r_max(spec.family),
            h=params.h if params.h is not None else self.settings.h,
            stencil=params.stencil or self.settings.stencil,
            max_rings=self.settings.max_rings,
            cache_dir=self.cache_dir,
        )

    def write(self, name: str, payload: dict[str, Any]) -> Path:
        path = atomic_write_text(self.out_dir / name, dumps_json(payload))
        logger.info("wrote %s", path)
        return path


def _point_json(z: complex) -> list[float]:
    return [z.real, z.imag]


def _check_op(ctx: RunContext, spec: WeightSpec) -> OPReport:
    s = ctx.settings
    return check_op_conditions(
        spec,
        r_max=s.op_r_max,
        n_samples=s.op_samples,
        a_grid=s.op_a_grid,
        margin=s.op_margin,
        seed=s.sample_seed,
    )


# =============================================================================
# Subcommands
# =============================================================================
def cmd_check_op(args: argparse.Namespace, ctx: RunContext) -> int:
    spec = ctx.spec()
    report = _check_op(ctx, spec)
    payload = {"spec": spec.to_dict(), "certified": report.certified, "report": report.to_dict()}
    ctx.write("op-report.json", payload)
    print(dumps_json(payload), end="")
    return 0


def cmd_kernel(args: argparse.Namespace, ctx: RunContext) -> int:
    spec = ctx.spec()
    z = RunConfig.point(ctx.config.z, "z")
    w = RunConfig.point(ctx.config.w, "w")
    kernel = ctx.kernel(spec)
    kv = kernel.evaluate(z, w)
    payload = {
        "spec": spec.to_dict(),
        "z": _point_json(z),
        "w": _point_json(w),
        "kernel": kv.to_dict(),
        "log_norm_kernel": normalized_kernel(spec, kv, z, w),
    }
    ctx.write("kernel.json", payload)
    print(dumps_json(payload), end="")
    return 0


def cmd_distance(args: argparse.Namespace, ctx: RunContext) -> int:
    spec = ctx.spec()
    z = RunConfig.point(ctx.config.z, "z")
    w = RunConfig.point(ctx.config.w, "w")
    graph = ctx.graph(spec)
    estimate = distance_estimate(graph, spec, z, w)
    payload = {
        "spec": spec.to_dict(),
        "z": _point_json(z),
        "w": _point_json(w),
        "distance": estimate.to_dict(),
        "hyperbolic_distance": hyperbolic_distance(z, w),
        "d_tau": dtau(spec, z, w),
        "graph": graph.summary(),
    }
    ctx.write("distance.json", payload)
    print(dumps_json(payload), end="")
    return 0


def cmd_decay_report(args: argparse.Namespace, ctx: RunContext) -> int:
    settings = ctx.settings
    params = ctx.config.decay
    spec = ctx.spec()
    kernel = ctx.kernel(spec)
    graph = ctx.graph(spec)
    seed = params.seed if params.seed is not None else settings.sample_seed

    samples = sample_pairs(
        spec,
        graph,
        kernel,
        strategy=params.strategy or settings.strategy,
        count=params.count or settings.sample_count,
        seed=seed,
        threads=settings.threads,
    )
    report = fit_decay(
        samples,
        bin_width=params.bin_width or settings.bin_width,
        slack=params.slack,
        fit_min_distance=(
            params.fit_min_distance if params.fit_min_distance is not None else settings.fit_min_distance
        ),
        slack_factor=settings.slack_factor,
    )

    r_limit = min(graph.r_max, getattr(kernel, "r_quad", 1.0))
    near = near_diagonal_check(
        kernel,
        alpha=params.alpha or settings.near_diag_alpha,
        samples=NEAR_DIAGONAL_SAMPLES,
        seed=seed,
        r_max=r_limit,
    )
    report = dataclasses.replace(report, near_diag_ratio=near.as_pair())

    beta = params.beta or settings.mean_value_beta
    mean_value = [
        {
            "z": _point_json(complex(r_limit * f)),
            "w": [0.0, 0.0],
            "beta": beta,
            "ratio": mean_value_check(kernel, complex(r_limit * f), 0j, beta, settings.mean_value_quad_n),
        }
        for f in MEAN_VALUE_POINTS
    ]

    op = _check_op(ctx, spec)
    psd_points = [p.w for p in samples.pairs[:PSD_POINTS]]
    psd_ratio = min_eigenvalue_ratio(kernel_matrix(kernel, psd_points, normalized=True)) if psd_points else None
    rows = compare_bounds(report, samples.pairs, params.k_list)

    extra = {
        "spec": spec.to_dict(),
        "kernel_method": kernel.METHOD,
        "excluded": samples.excluded,
        "near_diagonal": near.to_dict(),
        "mean_value": mean_value,
        "cauchy_schwarz_violations": cauchy_schwarz_violations(samples.pairs),
        "metric_comparison": {
            "C2_est": op.C2_est,
            "violations": metric_comparison_violations(samples.pairs, op.C2_est),
        },
        "psd_min_ratio": psd_ratio,
        "bound_comparison": [row.to_dict() for row in rows],
    }
    paths = write_decay_outputs(ctx.out_dir, report, samples.pairs, extra)
    for path in paths.values():
        logger.info("wrote %s", path)
    print(
        json.dumps(
            {
                "sigma_fit": report.sigma_fit,
                "logC_fit": report.logC_fit,
                "r2": report.r2,
                "violations": report.violations,
                "report": str(paths["report"]),
            },
            sort_keys=True,
        )
    )
    return 0


def cmd_oracle_test(args: argparse.Namespace, ctx: RunContext) -> int:
    results = run_oracle_suite(args.only)
    passed = all(r.passed for r in results)
    payload = {"passed": passed, "oracles": [r.to_dict() for r in results]}
    ctx.write("oracle-report.json", payload)
    print(dumps_json(payload), end="")
    return 0 if passed else NumericalAccuracyError.exit_code


COMMANDS: dict[str, Callable[[argparse.Namespace, RunContext], int]] = {
    "check-op": cmd_check_op,
    "kernel": cmd_kernel,
    "distance": cmd_distance,
    "decay-report": cmd_decay_report,
    "oracle-test": cmd_oracle_test,
}


def main(argv: Optional[list[str]] = None) -> int:
    """Entry point of the `bergkern` console script; returns the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)

    settings = get_settings()
    if args.threads is not None:
        if args.threads < 1:
            parser.error("--threads must be >= 1")
        settings = settings.model_copy(update={"threads": args.threads})
    configure_logging(args.log_level or settings.log_level)

    try:
        overrides = collect_overrides(args)
        config = build_run_config(args.config, overrides)
        # a spec path inside a config file is relative to that file
        spec_base = Path(args.config).parent if args.config and "spec" not in overrides else None
        return COMMANDS[args.command](args, RunContext(config, settings, spec_base))
    except BergkernError as e:
        logger.error("%s: %s", type(e).__name__, e)
        if isinstance(e, NumericalAccuracyError) and e.achieved is not None:
            logger.error("achieved %.3g, requested %s", e.achieved, e.requested)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
