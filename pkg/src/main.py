"""
Command-line entry point for Ricci Topology.
Computes Ollivier-Ricci curvature of a graph (edge list or seeded model network)
and runs the experiment battery: histograms, sweeps, correlations, geography,
hyperbolicity and solver timing.

Usage:
    python src/main.py curvature --generate gnp --params n=100,p=0.1 --seed 7
    python src/main.py stats --input edges.txt
"""

import argparse
import logging
import math
import os
import sys
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

# Add current directory to path for imports
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import (ALPHA_SWEEP, BENCH_REPEATS, DEFAULT_ALPHA, DEFAULT_OUTPUT_DIR,
                    DEFAULT_SEED, DEFAULT_WORKERS, EXIT_FAILURE, EXIT_OK, EXIT_USAGE,
                    HISTOGRAM_BIN_WIDTH, HYPERBOLICITY_SAMPLES, LOG_LEVEL, __version__,
                    setup_logging)
from engine.core_pipeline import RicciCorePipeline, params_text
from engine.experiments import STRATEGIES, DIRECTIONS
from engine.export import write_curvatures, write_series, write_table
from engine.generators import FAMILIES, GenSpec, model_battery
from engine.ingest import load_edge_list, load_geo
from engine.metrics import MetricError, pearson_r
from engine.ricci import parse_alpha

logger = logging.getLogger("ricci")

METRICS = ("betweenness", "farness", "degree", "clustering")


class UsageError(Exception):
    """Bad flag values that argparse cannot catch on its own."""


class RunConfig(BaseModel):
    """Validated inputs shared by every subcommand."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    command: str
    input_path: Optional[str] = None
    generate: Optional[GenSpec] = None
    degree_file: Optional[str] = None
    alpha: Fraction = DEFAULT_ALPHA
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2 ** 64)
    workers: int = Field(default=DEFAULT_WORKERS, ge=1)
    out: str = DEFAULT_OUTPUT_DIR
    fmt: Literal["csv", "json"] = "csv"

    @field_validator("alpha", mode="before")
    @classmethod
    def _exact_alpha(cls, value):
        return parse_alpha(value)

    @field_validator("out")
    @classmethod
    def _writable(cls, value: str) -> str:
        probe = os.path.abspath(value)
        while not os.path.exists(probe):
            parent = os.path.dirname(probe)
            if parent == probe:
                break
            probe = parent
        if not os.path.isdir(probe) or not os.access(probe, os.W_OK):
            raise ValueError(f"output directory {value} is not writable")
        return value

    @model_validator(mode="after")
    def _one_source(self):
        if self.command != "stats" or self.generate is not None or self.input_path is not None:
            if (self.input_path is None) == (self.generate is None):
                raise ValueError("exactly one of --input or --generate is required")
        return self


def parse_params(text: Optional[str]) -> Dict[str, str]:
    """'n=100,p=0.1' -> {'n': '100', 'p': '0.1'}"""
    params: Dict[str, str] = {}
    if not text:
        return params
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"bad --params entry {item!r}, expected KEY=VALUE")
        params[key.strip()] = value.strip()
    return params


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_argument_group("input")
    source.add_argument("--input", help="Edge list file")
    source.add_argument("--generate", choices=FAMILIES, help="Model network family")
    source.add_argument("--params", help="Family parameters as KEY=VALUE,...")
    source.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--alpha", default=str(DEFAULT_ALPHA), help="Lazy-walk parameter in [0,1]")
    common.add_argument("--workers", type=int, default=DEFAULT_WORKERS)
    common.add_argument("--out", default=DEFAULT_OUTPUT_DIR, help="Output directory")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--log-level", default=LOG_LEVEL)

    parser = argparse.ArgumentParser(prog="ricci", description="Ollivier-Ricci curvature of networks")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curvature", parents=[common], help="Edge curvature CSV")
    p.add_argument("--histogram", action="store_true", help="Also write the curvature histogram")
    p.add_argument("--bin-width", type=float, default=HISTOGRAM_BIN_WIDTH)
    p.add_argument("--alphas", help="Comma-separated alphas for a histogram sweep "
                                    "('default' for 0.1..0.9)")

    p = sub.add_parser("stats", parents=[common], help="Graph summary row")
    p.add_argument("--battery", action="store_true", help="All six model networks")

    p = sub.add_parser("sweep", parents=[common], help="Connectivity and robustness sweeps")
    p.add_argument("--kind", choices=("connectivity", "robustness", "both"), default="both")
    p.add_argument("--direction", choices=DIRECTIONS, default="increasing")
    p.add_argument("--strategy", choices=STRATEGIES, default="most_negative_first")
    p.add_argument("--trials", type=int, default=1)

    p = sub.add_parser("correlate", parents=[common], help="Curvature vs a graph metric")
    p.add_argument("--metric", choices=METRICS, default="betweenness")
    p.add_argument("--log-y", action="store_true")

    p = sub.add_parser("geo", parents=[common], help="Curvature vs geographic edge length")
    p.add_argument("--coords", required=True, help="CSV with label,lat,lon")

    p = sub.add_parser("hyperbolicity", parents=[common], help="Slim-triangle delta")
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--samples", type=int, default=HYPERBOLICITY_SAMPLES)

    p = sub.add_parser("bench", parents=[common], help="Per-edge solver time vs k_x*k_y")
    p.add_argument("--repeats", type=int, default=BENCH_REPEATS)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    spec = None
    degree_file = None
    if args.generate:
        params: Dict[str, Any] = parse_params(args.params)
        degree_file = params.pop("degree_file", None)
        spec = GenSpec(family=args.generate, params=params, seed=args.seed)
    elif args.params:
        raise UsageError("--params needs --generate")
    return RunConfig(command=args.command, input_path=args.input, generate=spec,
                     degree_file=degree_file, alpha=args.alpha, seed=args.seed,
                     workers=args.workers, out=args.out, fmt=args.format)


def make_pipeline(cfg: RunConfig) -> RicciCorePipeline:
    kwargs = dict(alpha=cfg.alpha, workers=cfg.workers, seed=cfg.seed)
    if cfg.input_path:
        pipeline = RicciCorePipeline.from_edge_list(cfg.input_path, **kwargs)
        pipeline.name = os.path.splitext(pipeline.name)[0]
        print(f"✅ Loaded {pipeline.ingest.summary()}")
        return pipeline
    degrees = None
    if cfg.degree_file:
        degrees = load_edge_list(cfg.degree_file).graph.degree_sequence()
        params = dict(cfg.generate.params, degree_file=cfg.degree_file)
        kwargs["source"] = {"family": cfg.generate.family, "params": params_text(params)}
    pipeline = RicciCorePipeline.from_spec(cfg.generate, degrees, **kwargs)
    print(f"✅ Generated {cfg.generate.family}: {pipeline.graph.n} nodes, {pipeline.graph.edge_count} edges")
    return pipeline


def _path(cfg: RunConfig, stem: str) -> str:
    return os.path.join(cfg.out, f"{stem}.{cfg.fmt}")


def _alpha_tag(alpha: Fraction) -> str:
    return f"{float(alpha):g}"


def run_curvature(cfg: RunConfig, args: argparse.Namespace, pipeline: RicciCorePipeline) -> None:
    path = _path(cfg, f"{pipeline.name}_curvature")
    write_curvatures(pipeline.curvature, path, cfg.fmt, meta=pipeline.source_meta())
    print(f"✅ {len(pipeline.curvature)} edge curvatures (alpha={pipeline.alpha}) -> {path}")

    if args.histogram:
        path = _path(cfg, f"{pipeline.name}_histogram")
        write_series(pipeline.histogram(args.bin_width), path, cfg.fmt)
        print(f"✅ Histogram -> {path}")

    if args.alphas:
        if args.alphas == "default":
            alphas: Sequence[Any] = ALPHA_SWEEP
        else:
            alphas = [a.strip() for a in args.alphas.split(",") if a.strip()]
        for alpha, hist in pipeline.alpha_histograms(alphas, args.bin_width):
            path = _path(cfg, f"{pipeline.name}_histogram_alpha{_alpha_tag(alpha)}")
            write_series(hist, path, cfg.fmt)
            print(f"✅ Histogram alpha={alpha} -> {path}")


def run_stats(cfg: RunConfig, args: argparse.Namespace) -> None:
    rows: List[Dict[str, Any]] = []
    meta: Dict[str, Any] = {"kind": "stats", "seed": cfg.seed, "battery": args.battery}
    if args.battery:
        for name, graph in model_battery(cfg.seed).items():
            rows.append(RicciCorePipeline(graph, seed=cfg.seed, name=name).stats_row())
    if cfg.input_path or cfg.generate:
        pipeline = make_pipeline(cfg)
        meta.update(pipeline.source_meta())
        rows.append(pipeline.stats_row())
    if not rows:
        raise UsageError("stats needs --input, --generate or --battery")
    for row in rows:
        print("✅ " + "  ".join(f"{k}={v}" for k, v in row.items()))
    path = _path(cfg, "stats")
    write_table(rows, path, cfg.fmt, meta=meta)
    print(f"✅ Stats -> {path}")


def run_sweep(cfg: RunConfig, args: argparse.Namespace, pipeline: RicciCorePipeline) -> None:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.kind in ("connectivity", "both"):
        series = pipeline.connectivity(args.direction)
        path = _path(cfg, f"{pipeline.name}_connectivity_{args.direction}")
        write_series(series, path, cfg.fmt)
        print(f"✅ Connectivity sweep (peak {max(series.ys):.0f} components) -> {path}")
    if args.kind in ("robustness", "both"):
        headline, runs = pipeline.robustness(args.strategy, args.trials)
        path = _path(cfg, f"{pipeline.name}_robustness_{args.strategy}")
        write_series(headline, path, cfg.fmt)
        print(f"✅ Robustness sweep -> {path}")
        if len(runs) > 1:
            for t, run in enumerate(runs):
                write_series(run, _path(cfg, f"{pipeline.name}_robustness_{args.strategy}_trial{t}"), cfg.fmt)
            print(f"✅ {len(runs)} per-trial series written")


def run_correlate(cfg: RunConfig, args: argparse.Namespace, pipeline: RicciCorePipeline) -> None:
    result = pipeline.correlation(args.metric, args.log_y)
    path = _path(cfg, f"{pipeline.name}_correlate_{args.metric}")
    write_series(result.points, path, cfg.fmt)
    if result.excluded:
        print(f"✅ Excluded {result.excluded} non-positive values from log10")
    print(f"✅ r = {result.r:.4f} over {len(result.points)} points -> {path}")


def run_geo(cfg: RunConfig, args: argparse.Namespace, pipeline: RicciCorePipeline) -> None:
    report = load_geo(args.coords, pipeline.graph)
    if report.unmatched:
        print(f"✅ {len(report.unmatched)} geo labels not in the graph")
    series, skipped = pipeline.geo(report)
    series.meta["coords"] = args.coords
    path = _path(cfg, f"{pipeline.name}_geo")
    write_series(series, path, cfg.fmt)
    print(f"✅ {len(series)} geolocated edges ({skipped} skipped) -> {path}")
    try:
        print(f"✅ r(kappa, km) = {pearson_r(series.xs, series.ys):.4f}")
    except MetricError as exc:
        logger.info("no geo correlation: %s", exc)


def run_hyperbolicity(cfg: RunConfig, args: argparse.Namespace, pipeline: RicciCorePipeline) -> None:
    row = pipeline.hyperbolicity(args.mode, args.samples)
    path = _path(cfg, f"{pipeline.name}_hyperbolicity")
    meta = dict(pipeline.source_meta(), kind="hyperbolicity", samples=args.samples,
                fingerprint=pipeline.graph.fingerprint())
    write_table([row], path, cfg.fmt, meta=meta)
    print(f"✅ delta = {row['delta']} (diameter {row['diameter']}, ratio {row['ratio']}) -> {path}")


def run_bench(cfg: RunConfig, args: argparse.Namespace, pipeline: RicciCorePipeline) -> None:
    if args.repeats < 1:
        raise UsageError("--repeats must be >= 1")
    series, r = pipeline.benchmark(args.repeats)
    path = _path(cfg, f"{pipeline.name}_bench")
    write_series(series, path, cfg.fmt)
    r_text = "undefined (k_x*k_y is constant)" if math.isnan(r) else f"{r:.4f}"
    print(f"✅ r(seconds, k_x*k_y) = {r_text} over {len(series)} edges -> {path}")


COMMANDS = {
    "curvature": run_curvature,
    "sweep": run_sweep,
    "correlate": run_correlate,
    "geo": run_geo,
    "hyperbolicity": run_hyperbolicity,
    "bench": run_bench,
}


def _validation_message(exc: ValidationError) -> str:
    first = exc.errors()[0]
    msg = str(first.get("msg", exc))
    return msg.removeprefix("Value error, ")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        0 on success, 1 when the computation fails, 2 for bad usage
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    setup_logging(args.log_level)
    try:
        cfg = make_config(args)
        os.makedirs(cfg.out, exist_ok=True)
        if cfg.command == "stats":
            run_stats(cfg, args)
        else:
            COMMANDS[cfg.command](cfg, args, make_pipeline(cfg))
    except ValidationError as exc:
        print(f"error: {_validation_message(exc)}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
