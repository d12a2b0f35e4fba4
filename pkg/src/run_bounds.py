"""Command-line entry point: bounds, distribution exports and figure series."""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import yaml

from src.cg import CGSettings, run_cg
from src.figures import SERIES, FigureSettings, provenance, run_series, write_series
from src.ingest import parse_problem_file, problem_to_dict
from src.model import FamilyVariant, MixtureFamily
from src.shape import MixtureDistribution, bisect_alpha, export_distribution
from src.utils.db import record_run
from src.utils.errors import SemiboundsError, ValidationError

logging.basicConfig(
    level=os.environ.get("SEMIBOUNDS_LOG_LEVEL", "INFO").upper(),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2


def load_config(config_path: Path) -> dict:
    """Load configuration from YAML file."""
    try:
        with open(config_path, "r") as f:
            config = yaml.safe_load(f) or {}
        logger.debug(f"Configuration loaded from {config_path}")
        return config
    except Exception as e:
        logger.error(f"Error loading config: {e}")
        sys.exit(EXIT_ERROR)


def _load_problem(args):
    spec = parse_problem_file(args.problem)
    overrides = {}
    if args.epsilon is not None:
        overrides["cg_epsilon"] = args.epsilon
    if args.cap is not None:
        overrides["search_cap"] = args.cap
    if getattr(args, "eta", None) is not None:
        if spec.family.variant != FamilyVariant.SMOOTHED_UNIFORM:
            raise ValidationError("--eta needs a smoothed_uniform family", field="eta")
        overrides["family"] = MixtureFamily.smoothed_uniform(spec.family.mode, args.eta)
    return spec.replace(**overrides).validate() if overrides else spec


def _record(config: dict, command: str, spec, result):
    try:
        record_run(config, command, problem_to_dict(spec), result)
    except Exception as e:
        logger.warning(f"Could not record run in the ledger: {e}")


def cmd_bound(args, config: dict) -> int:
    spec = _load_problem(args)
    result = run_cg(spec, CGSettings.from_config(config))
    logger.info(
        f"Bound {result.bound:.12g} (gap {result.gap:.3e}, {result.iterations} iterations, "
        f"{result.elapsed:.2f}s)"
    )
    print(json.dumps(result.to_dict(), indent=2))
    _record(config, "bound", spec, result)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_export(args, config: dict) -> int:
    spec = _load_problem(args)
    settings = CGSettings.from_config(config)
    shape = config.get("shape", {}) or {}
    n_points = args.points or int(shape.get("export_points", 512))

    if args.alpha_lo is not None or args.alpha_hi is not None:
        if args.alpha_lo is None or args.alpha_hi is None:
            raise ValidationError("--alpha-lo and --alpha-hi go together", field="alpha")
        bisection = bisect_alpha(
            spec,
            args.alpha_lo,
            args.alpha_hi,
            float(shape.get("bisection_epsilon", 0.05)),
            settings,
            unimodality_grid=int(shape.get("unimodality_grid", 4096)),
        )
        result = bisection.result
        spec = spec.with_family(result.family)
        logger.info(f"Exporting the mixture at alpha* = {bisection.alpha_star:.6g}")
    else:
        result = run_cg(spec, settings)

    table = export_distribution(MixtureDistribution.from_result(result), n_points)
    output = Path(args.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(output, index=False, float_format="%.12g", lineterminator="\n")
    logger.info(f"Wrote {len(table)} rows ({table.attrs['format']}) to {output}")
    _record(config, "export", spec, result)
    if not result.converged:
        logger.warning("Column generation did not converge; the export is approximate")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_figure(args, config: dict) -> int:
    settings = FigureSettings.from_config(config)
    if args.jobs is not None:
        settings.n_jobs = args.jobs
    if args.points is not None:
        settings.export_points = args.points
    cg = CGSettings.from_config(config).with_overrides(epsilon=args.epsilon)
    out_dir = args.output or config.get("paths", {}).get("reports_dir", "reports")

    ids = list(SERIES) if args.series == "all" else [args.series]
    status = EXIT_OK
    for series_id in ids:
        series = run_series(series_id, settings, cg)
        write_series(series, out_dir, provenance(series, settings, cg))
        if not series.converged:
            logger.warning(f"Series {series_id} has non-converged solves")
            status = EXIT_NOT_CONVERGED
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Semiparametric bounds by column generation")
    parser.add_argument(
        "--config", type=str, default="config/config.yaml", help="Path to config file"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bound = sub.add_parser("bound", help="Compute a bound and print it as JSON")
    bound.add_argument("problem", type=str, help="Problem file (JSON)")
    bound.add_argument("--epsilon", type=float, default=None, help="Stopping tolerance")
    bound.add_argument("--cap", type=float, default=None, help="Search cap on unbounded supports")
    bound.add_argument("--eta", type=float, default=None, help="Smoothing for smoothed_uniform")
    bound.set_defaults(handler=cmd_bound)

    export = sub.add_parser("export", help="Write the extremal distribution as CSV")
    export.add_argument("problem", type=str, help="Problem file (JSON)")
    export.add_argument("--points", type=int, default=None, help="Evaluation grid size")
    export.add_argument("-o", "--output", type=str, required=True, help="Output CSV path")
    export.add_argument("--epsilon", type=float, default=None, help="Stopping tolerance")
    export.add_argument("--cap", type=float, default=None, help="Search cap on unbounded supports")
    export.add_argument("--eta", type=float, default=None, help="Smoothing for smoothed_uniform")
    export.add_argument("--alpha-lo", type=float, default=None, help="Bisection bracket low end")
    export.add_argument("--alpha-hi", type=float, default=None, help="Bisection bracket high end")
    export.set_defaults(handler=cmd_export)

    figure = sub.add_parser("figure", help="Compute a figure data series")
    figure.add_argument("series", choices=list(SERIES) + ["all"], help="Series id")
    figure.add_argument("-o", "--output", type=str, default=None, help="Output directory")
    figure.add_argument("--jobs", type=int, default=None, help="Parallel workers")
    figure.add_argument("--points", type=int, default=None, help="Density grid size")
    figure.add_argument("--epsilon", type=float, default=None, help="Stopping tolerance")
    figure.set_defaults(handler=cmd_figure)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    config_path = Path(args.config)
    if not config_path.exists():
        logger.error(f"Config file not found: {config_path}")
        return EXIT_ERROR
    config = load_config(config_path)

    try:
        return args.handler(args, config)
    except SemiboundsError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_ERROR
    except Exception as e:
        logger.error(f"{args.command} failed with error: {e}", exc_info=True)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
