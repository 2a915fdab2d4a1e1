"""
Module cli - Command-line front end: analyze, compare and synth
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from . import __version__
from .core import BohmianWallsError, ConfigError, DataIOError, PipelineConfig, WallStrategy
from .market_data import FormatSpec
from .report import RunOutput, run_analysis, run_comparison, run_synth
from .scaling import ScaleRunner
from .synth import SynthKind, SynthSpec

logger = logging.getLogger(__name__)

OUT_DIR_ENV = "BOHMIAN_WALLS_OUT_DIR"
DEFAULT_OUT_DIR = "./bohmian-walls-out"
EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_DOMAIN = 2

_handler: Optional[RichHandler] = None


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Route the package logger through one RichHandler on stderr"""
    global _handler
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    package_logger = logging.getLogger("bohmian_walls")
    if _handler is None:
        _handler = RichHandler(console=Console(stderr=True), show_path=False)
        _handler.setFormatter(logging.Formatter("%(message)s"))
        package_logger.addHandler(_handler)
        package_logger.propagate = False
    package_logger.setLevel(level)
    _handler.setLevel(level)


def parse_taus(text: str) -> Tuple[int, ...]:
    """'1,2,4,8' -> (1, 2, 4, 8)"""
    try:
        taus = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"--taus must be a comma-separated list of integers, got {text!r}") from exc
    if not taus:
        raise ConfigError("--taus is empty")
    return taus


def _read_config_file(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DataIOError(f"cannot read config file {path}: {exc}", stage="config") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}", stage="config") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object", stage="config")
    return data


def _pipeline_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Nested override dictionary from the flags that were actually given"""
    overrides: Dict[str, Dict[str, Any]] = {"density": {}, "potential": {}, "walls": {}, "scaling": {}}
    if args.estimator is not None:
        overrides["density"]["method"] = args.estimator
    if args.bandwidth is not None:
        overrides["density"]["bandwidth"] = args.bandwidth
    if args.negate_potential:
        overrides["potential"]["negate"] = True
    if args.wall_strategy is not None:
        overrides["walls"]["strategy"] = args.wall_strategy
    if args.p_floor_rel is not None:
        overrides["walls"]["p_floor_rel"] = args.p_floor_rel
    if args.peak_prominence is not None:
        overrides["walls"]["peak_prominence_rel"] = args.peak_prominence
    if getattr(args, "taus", None) is not None:
        overrides["scaling"]["taus"] = list(parse_taus(args.taus))
    if args.stride is not None:
        overrides["scaling"]["stride"] = args.stride
    if getattr(args, "workers", None) is not None:
        overrides["scaling"]["workers"] = args.workers
    return {section: values for section, values in overrides.items() if values}


def resolve_run_settings(args: argparse.Namespace) -> Tuple[PipelineConfig, FormatSpec, int]:
    """
    Effective pipeline config, input format and seed.
    CLI flags override the --config file, which overrides the defaults.
    """
    file_data: Dict[str, Any] = {}
    if args.config is not None:
        file_data = _read_config_file(args.config)
    file_data = dict(file_data)
    file_seed = file_data.pop("seed", None)
    file_format = file_data.pop("format", None) or {}
    if not isinstance(file_format, dict):
        raise ConfigError("config 'format' must be a JSON object", stage="config")

    config = PipelineConfig.from_dict(file_data).merged(_pipeline_overrides(args))

    known = set(FormatSpec.__dataclass_fields__)
    unknown = set(file_format) - known
    if unknown:
        raise ConfigError(f"unknown key(s) in 'format': {sorted(unknown)}", stage="config")
    format_values = dict(file_format)
    for key in ("date_column", "price_column", "date_format"):
        value = getattr(args, key)
        if value is not None:
            format_values[key] = value
    format_spec = FormatSpec(**format_values)

    seed = args.seed if args.seed is not None else file_seed if file_seed is not None else 0
    try:
        seed = int(seed)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"seed must be an integer, got {seed!r}", stage="config") from exc
    if seed < 0:
        raise ConfigError("seed must be non-negative", stage="config")
    return config, format_spec, seed


def resolve_out_dir(args: argparse.Namespace) -> Path:
    return Path(args.out_dir or os.environ.get(OUT_DIR_ENV) or DEFAULT_OUT_DIR)


def _progress_runner(config: PipelineConfig) -> ScaleRunner:
    runner = ScaleRunner(config)
    runner.bind_callback("tau_started", lambda tau: logger.debug("tau=%d started", tau))
    runner.bind_callback(
        "tau_completed",
        lambda tau, result: logger.info("tau=%d: walls %.6g .. %.6g (n=%d)", tau,
                                        result.walls.q_minus, result.walls.q_plus,
                                        result.n_samples),
    )
    runner.bind_callback("tau_failed", lambda tau, exc: logger.debug("tau=%d failed: %s", tau, exc.kind))
    return runner


def _analysis_table(report: Dict[str, Any]) -> Table:
    table = Table(title=f"Wall widths: {report['instrument_id']}")
    table.add_column("tau", justify="right")
    table.add_column("n", justify="right")
    table.add_column("q-", justify="right")
    table.add_column("q+", justify="right")
    table.add_column("width", justify="right")
    for scale in report["scales"]:
        pair = scale["wall_pair"]
        table.add_row(str(scale["tau"]), str(scale["n_samples"]), f"{pair['q_minus']:.5f}",
                      f"{pair['q_plus']:.5f}", f"{scale['width']:.5f}")
    fit = report["scaling_fit"]
    table.caption = f"slope {fit['slope']:.4f}, R^2 {fit['r_squared']:.4f}"
    return table


def cmd_analyze(args: argparse.Namespace) -> int:
    """Full multi-scale pipeline on one price file"""
    config, format_spec, seed = resolve_run_settings(args)
    output: RunOutput = run_analysis(args.input, resolve_out_dir(args), config, format_spec,
                                     seed=seed, emit_grids=args.emit_grids,
                                     runner=_progress_runner(config))
    if not args.quiet:
        Console(stderr=True).print(_analysis_table(output.report))
    print(output.report_path)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    """Market potential against matched white noise at one scale"""
    config, format_spec, seed = resolve_run_settings(args)
    output = run_comparison(args.input, resolve_out_dir(args), seed, args.tau, config, format_spec)
    if not args.quiet:
        report = output.report
        table = Table(title=f"Comparison at tau={report['tau']}: {report['instrument_id']}")
        table.add_column("series")
        table.add_column("sigma", justify="right")
        table.add_column("q-", justify="right")
        table.add_column("q+", justify="right")
        for name in ("market", "baseline"):
            side = report[name]
            table.add_row(name, f"{side['sigma']:.6g}", f"{side['wall_pair']['q_minus']:.5f}",
                          f"{side['wall_pair']['q_plus']:.5f}")
        table.caption = (f"RMS dU {report['rms_potential_difference']:.6g} "
                         f"(scaled {report['scaled_rms_difference']:.4f})")
        Console(stderr=True).print(table)
    print(output.report_path)
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    """Write a synthetic price file"""
    spec = SynthSpec(SynthKind(args.kind), args.n, args.sigma, args.hurst, args.seed, args.df)
    paths = run_synth(spec, args.output, args.instrument_id, args.start_date)
    print(paths[0])
    return EXIT_OK


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="Delimited price file with a header row")
    parser.add_argument("--config", default=None, help="JSON config file (PipelineConfig layout)")
    parser.add_argument("--estimator", choices=["kde", "histogram"], default=None)
    parser.add_argument("--bandwidth", type=float, default=None,
                        help="KDE bandwidth (default: Silverman's rule)")
    parser.add_argument("--wall-strategy", choices=[s.value for s in WallStrategy], default=None)
    parser.add_argument("--p-floor-rel", type=float, default=None,
                        help="Reliable-support floor relative to the density peak")
    parser.add_argument("--peak-prominence", type=float, default=None,
                        help="Minimum potential-peak prominence relative to the U range")
    parser.add_argument("--negate-potential", action="store_true",
                        help="Use U = -hbar^2 R''/(2mR)")
    parser.add_argument("--stride", choices=["1", "tau"], default=None)
    parser.add_argument("--seed", type=int, default=None, help="White-noise baseline seed")
    parser.add_argument("--out-dir", default=None,
                        help=f"Output directory (default: ${OUT_DIR_ENV} or {DEFAULT_OUT_DIR})")
    parser.add_argument("--date-column", default=None)
    parser.add_argument("--price-column", default=None)
    parser.add_argument("--date-format", default=None, help="strptime format, e.g. %%Y-%%m-%%d")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bohmian-walls",
        description="Quantum-potential walls of return distributions across time scales",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings only")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="Walls and width scaling over many taus")
    _add_pipeline_flags(analyze)
    analyze.add_argument("--taus", default=None, help="Comma-separated scales, e.g. 1,2,4,8")
    analyze.add_argument("--workers", type=int, default=None, help="Threads for the tau sweep")
    analyze.add_argument("--emit-grids", action="store_true",
                         help="Write one q,p,U,valid CSV per scale")
    analyze.set_defaults(handler=cmd_analyze)

    compare = commands.add_parser("compare", help="Market vs matched white noise at one scale")
    _add_pipeline_flags(compare)
    compare.add_argument("--tau", type=int, default=1)
    compare.set_defaults(handler=cmd_compare)

    synth = commands.add_parser("synth", help="Write a synthetic price file")
    synth.add_argument("--kind", choices=[k.value for k in SynthKind], default=SynthKind.WHITE.value)
    synth.add_argument("--n", type=int, default=SynthSpec.n, help="Number of returns")
    synth.add_argument("--sigma", type=float, default=SynthSpec.sigma)
    synth.add_argument("--hurst", type=float, default=SynthSpec.hurst)
    synth.add_argument("--df", type=float, default=SynthSpec.df, help="Student-t degrees of freedom")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--output", required=True)
    synth.add_argument("--instrument-id", default=None)
    synth.add_argument("--start-date", default="2000-01-03")
    synth.set_defaults(handler=cmd_synth)
    return parser


def _emit_error(error: Dict[str, Any]) -> None:
    print(json.dumps({"error": error}))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code"""
    args = build_parser().parse_args(list(argv) if argv is not None else None)
    configure_logging(args.verbose, args.quiet)
    try:
        return args.handler(args)
    except BohmianWallsError as exc:
        logger.error("%s", exc)
        _emit_error(exc.to_dict())
        return EXIT_DOMAIN
    except Exception as exc:
        logger.exception("Internal error")
        _emit_error({"kind": "internal", "message": str(exc), "stage": None, "tau": None})
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
