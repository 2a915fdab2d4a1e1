"""
Module report - Analysis and comparison runs, JSON reports and CSV sidecars
"""

import io
import json
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import jsonschema
import numpy as np
import pandas as pd

from . import __version__
from .core import (
    BohmianWallsError,
    InsufficientScalesError,
    PipelineConfig,
    ReportError,
)
from .density import shared_grid
from .market_data import FormatSpec, PriceSeries, ReturnSeries, load_price_series, log_returns
from .scaling import (
    MIN_FIT_POINTS,
    MIN_HURST_SAMPLES,
    MIN_PIECEWISE_POINTS,
    ScaleResult,
    ScaleRunner,
    WidthCurve,
    analyze_returns,
    estimate_hurst,
    fit_piecewise,
    fit_scaling,
)
from .synth import SynthSpec, generate, matched_white_noise, returns_to_prices, write_price_file
from .utils import FileUtils
from .walls import reliable_support

logger = logging.getLogger(__name__)

TOOL_NAME = "bohmian-walls"
SCHEMA_VERSION = "1.0"
GRID_COLUMNS = ("q", "p", "U", "valid")
WIDTH_COLUMNS = ("tau", "width", "q_minus", "q_plus")
COMPARE_COLUMNS = ("q", "p_market", "U_market", "valid_market",
                   "p_baseline", "U_baseline", "valid_baseline")


@lru_cache(maxsize=None)
def load_schema(name: str) -> Dict[str, Any]:
    """Shipped JSON schema `name` ('analysis_report' or 'comparison_report')"""
    text = resources.files("bohmian_walls").joinpath("schemas", f"{name}.schema.json").read_text(
        encoding="utf-8")
    return json.loads(text)


def validate_report(data: Dict[str, Any], name: str = "analysis_report") -> None:
    """Raise ReportError unless `data` matches the shipped schema"""
    try:
        jsonschema.Draft202012Validator(load_schema(name)).validate(data)
    except jsonschema.ValidationError as exc:
        raise ReportError(f"{name} does not match its schema: {exc.message}",
                          stage="report") from exc


def _check_finite(value: Any, path: str = "report") -> None:
    if isinstance(value, float) and not math.isfinite(value):
        raise ReportError(f"non-finite number at {path}", stage="report")
    if isinstance(value, dict):
        for key, item in value.items():
            _check_finite(item, f"{path}.{key}")
    elif isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _check_finite(item, f"{path}[{i}]")


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _frame_to_csv(frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format="%.17g", na_rep="", lineterminator="\n")
    return buffer.getvalue()


def grid_table(result: ScaleResult) -> str:
    """CSV with columns q, p, U, valid (U empty where invalid)"""
    pot = result.potential
    frame = pd.DataFrame({
        "q": result.density.q,
        "p": result.density.p,
        "U": np.where(pot.valid, pot.U, np.nan),
        "valid": pot.valid.astype(int),
    }, columns=list(GRID_COLUMNS))
    return _frame_to_csv(frame)


def width_table(curve: WidthCurve) -> str:
    """CSV with columns tau, width, q_minus, q_plus"""
    frame = pd.DataFrame(
        [(r.tau, r.width, r.walls.q_minus, r.walls.q_plus) for r in curve.results],
        columns=list(WIDTH_COLUMNS),
    )
    return _frame_to_csv(frame)


def format_echo(spec: FormatSpec) -> Dict[str, Any]:
    return {
        "date_column": spec.date_column,
        "price_column": spec.price_column,
        "date_format": spec.date_format,
        "delimiter": spec.delimiter,
        "instrument_id": spec.instrument_id,
    }


def config_echo(config: PipelineConfig, seed: int, format_spec: FormatSpec) -> Dict[str, Any]:
    echo = config.to_dict()
    echo["seed"] = seed
    echo["format"] = format_echo(format_spec)
    return echo


@dataclass
class AnalysisReport:
    """Everything `analyze` reports for one instrument"""
    instrument_id: str
    config: Dict[str, Any]
    input: Dict[str, Any]
    curve: WidthCurve
    scaling_fit: Dict[str, Any]
    piecewise_fit: Optional[Dict[str, Any]]
    hurst: Optional[float]
    baseline: Optional[Dict[str, Any]]
    grid_paths: Dict[int, str] = field(default_factory=dict)
    generated_at: str = field(default_factory=_timestamp)

    def to_dict(self) -> Dict[str, Any]:
        scales = []
        for result in self.curve.results:
            record = result.to_dict()
            record["grid_csv"] = self.grid_paths.get(result.tau)
            scales.append(record)
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": TOOL_NAME,
            "tool_version": __version__,
            "generated_at": self.generated_at,
            "instrument_id": self.instrument_id,
            "input": self.input,
            "config": self.config,
            "scales": scales,
            "failures": [dict(f) for f in self.curve.failures],
            "scaling_fit": self.scaling_fit,
            "piecewise_fit": self.piecewise_fit,
            "hurst": self.hurst,
            "baseline": self.baseline,
        }


@dataclass
class Comparison:
    """Market and matched white-noise pipelines on one shared grid"""
    market: ScaleResult
    baseline: ScaleResult
    market_sigma: float
    baseline_sigma: float
    shared: np.ndarray
    seed: int

    @property
    def rms_difference(self) -> float:
        """RMS of U_market - U_baseline over the shared region"""
        if not self.shared.any():
            return 0.0
        diff = self.market.potential.U[self.shared] - self.baseline.potential.U[self.shared]
        return float(np.sqrt(np.mean(diff ** 2)))

    @property
    def scaled_rms_difference(self) -> float:
        """RMS difference in units of the market variance (dimensionless)"""
        return self.rms_difference * self.market_sigma ** 2

    def table(self) -> str:
        """CSV with the two curves on the shared grid"""
        m, b = self.market, self.baseline
        frame = pd.DataFrame({
            "q": m.density.q,
            "p_market": m.density.p,
            "U_market": np.where(m.potential.valid, m.potential.U, np.nan),
            "valid_market": m.potential.valid.astype(int),
            "p_baseline": b.density.p,
            "U_baseline": np.where(b.potential.valid, b.potential.U, np.nan),
            "valid_baseline": b.potential.valid.astype(int),
        }, columns=list(COMPARE_COLUMNS))
        return _frame_to_csv(frame)


def compare_with_white_noise(market: ReturnSeries, seed: int,
                             config: Optional[PipelineConfig] = None) -> Comparison:
    """
    Run the pipeline on `market` and on white noise with the same n and
    sigma, both on one grid. The shared region is where both potentials are
    valid and both densities clear the wall floor.
    """
    config = config or PipelineConfig()
    baseline = matched_white_noise(market, seed)
    grid = shared_grid(market, [baseline], config.density.grid)
    market_result = analyze_returns(market, config, grid)
    baseline_result = analyze_returns(baseline, config, grid)

    shared = market_result.potential.valid & baseline_result.potential.valid
    for result in (market_result, baseline_result):
        lo, hi = reliable_support(result.density, config.walls.p_floor_rel)
        inside = np.zeros(shared.shape, dtype=bool)
        inside[lo:hi + 1] = True
        shared &= inside
    return Comparison(market_result, baseline_result, market.sigma, baseline.sigma, shared, seed)


def _baseline_summary(market: ReturnSeries, market_width: float, seed: int,
                      config: PipelineConfig) -> Optional[Dict[str, Any]]:
    try:
        noise = matched_white_noise(market, seed)
        result = analyze_returns(noise, config)
    except BohmianWallsError as exc:
        logger.warning("White-noise baseline skipped: %s", exc)
        return None
    return {
        "seed": seed,
        "sigma": float(noise.sigma),
        "n": noise.n,
        "q_minus": result.walls.q_minus,
        "q_plus": result.walls.q_plus,
        "width": float(result.width),
        "market_width": float(market_width),
    }


@dataclass
class RunOutput:
    """A finished run: report dictionary and every file written"""
    report: Dict[str, Any]
    report_path: Path
    files: List[Path]


def _instrument_stem(instrument_id: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in instrument_id) or "instrument"


def run_analysis(input_path: Union[str, Path], out_dir: Union[str, Path],
                 config: Optional[PipelineConfig] = None,
                 format_spec: Optional[FormatSpec] = None,
                 seed: int = 0,
                 emit_grids: bool = False,
                 runner: Optional[ScaleRunner] = None) -> RunOutput:
    """Full multi-scale analysis of one price file, written to `out_dir`"""
    config = config or PipelineConfig()
    format_spec = format_spec or FormatSpec()
    if len(config.scaling.taus) < MIN_FIT_POINTS:
        raise InsufficientScalesError(
            f"{len(config.scaling.taus)} scale(s) configured, need at least {MIN_FIT_POINTS}",
            stage="config")

    input_path = Path(input_path)
    series, dropped = load_price_series(input_path, format_spec)
    runner = runner or ScaleRunner(config)
    curve = runner.run(series)
    scaling = fit_scaling(curve)
    piecewise = None
    if len(curve) >= MIN_PIECEWISE_POINTS:
        piecewise = fit_piecewise(curve, config.scaling.piecewise_delta).to_dict()

    daily = log_returns(series, 1, 1)
    hurst = None
    if daily.n >= MIN_HURST_SAMPLES:
        hurst = float(estimate_hurst(daily, config.scaling.hurst_min_blocks))
    daily_width = next((r.width for r in curve.results if r.tau == 1), None)
    if daily_width is None:
        daily_width = _daily_width(daily, config)
    baseline = None
    if daily_width is not None:
        baseline = _baseline_summary(daily, daily_width, seed, config)

    out_dir = Path(out_dir)
    stem = _instrument_stem(series.instrument_id)
    files: List[Path] = []
    grid_paths: Dict[int, str] = {}
    if emit_grids:
        for result in curve.results:
            path = FileUtils.atomic_write_text(out_dir / f"{stem}.tau{result.tau}.grid.csv",
                                               grid_table(result))
            grid_paths[result.tau] = path.name
            files.append(path)
    files.append(FileUtils.atomic_write_text(out_dir / f"{stem}.widths.csv", width_table(curve)))

    report = AnalysisReport(
        instrument_id=series.instrument_id,
        config=config_echo(config, seed, format_spec),
        input={
            "path": str(input_path),
            "sha256": FileUtils.sha256(input_path),
            "rows": len(series),
            "dropped_rows": dropped,
        },
        curve=curve,
        scaling_fit=scaling.to_dict(),
        piecewise_fit=piecewise,
        hurst=hurst,
        baseline=baseline,
        grid_paths=grid_paths,
    ).to_dict()
    report_path = write_report(report, out_dir / f"{stem}.report.json", "analysis_report")
    files.append(report_path)
    logger.info("Analysis of %s: slope %.4f (R^2 %.4f) over %d scale(s)",
                series.instrument_id, scaling.slope, scaling.r_squared, len(curve))
    return RunOutput(report, report_path, files)


def _daily_width(daily: ReturnSeries, config: PipelineConfig) -> Optional[float]:
    try:
        return float(analyze_returns(daily, config).width)
    except BohmianWallsError as exc:
        logger.warning("No daily walls for the baseline: %s", exc)
        return None


def comparison_report(comparison: Comparison, instrument_id: str, echo: Dict[str, Any],
                      grid_csv: Optional[str] = None) -> Dict[str, Any]:
    def side(result: ScaleResult, sigma: float) -> Dict[str, Any]:
        return {"n": result.n_samples, "sigma": float(sigma), "wall_pair": result.walls.to_dict()}

    return {
        "schema_version": SCHEMA_VERSION,
        "tool": TOOL_NAME,
        "tool_version": __version__,
        "generated_at": _timestamp(),
        "instrument_id": instrument_id,
        "tau": comparison.market.tau,
        "seed": comparison.seed,
        "config": echo,
        "market": side(comparison.market, comparison.market_sigma),
        "baseline": side(comparison.baseline, comparison.baseline_sigma),
        "grid_csv": grid_csv,
        "shared_points": int(comparison.shared.sum()),
        "rms_potential_difference": comparison.rms_difference,
        "scaled_rms_difference": comparison.scaled_rms_difference,
    }


def run_comparison(input_path: Union[str, Path], out_dir: Union[str, Path], seed: int,
                   tau: int = 1,
                   config: Optional[PipelineConfig] = None,
                   format_spec: Optional[FormatSpec] = None) -> RunOutput:
    """Market vs matched white noise at one scale, written to `out_dir`"""
    config = config or PipelineConfig()
    format_spec = format_spec or FormatSpec()
    series, _ = load_price_series(input_path, format_spec)
    market = log_returns(series, tau, config.scaling.stride_for(tau))
    comparison = compare_with_white_noise(market, seed, config)

    out_dir = Path(out_dir)
    stem = _instrument_stem(series.instrument_id)
    grid_path = FileUtils.atomic_write_text(out_dir / f"{stem}.compare.tau{tau}.csv",
                                            comparison.table())
    report = comparison_report(comparison, series.instrument_id,
                               config_echo(config, seed, format_spec), grid_path.name)
    report_path = write_report(report, out_dir / f"{stem}.compare.json", "comparison_report")
    return RunOutput(report, report_path, [grid_path, report_path])


def run_synth(spec: SynthSpec, output_path: Union[str, Path],
              instrument_id: Optional[str] = None,
              start_date: str = "2000-01-03") -> List[Path]:
    """Write a synthetic price file plus its generator metadata sidecar"""
    returns = generate(spec)
    prices: PriceSeries = returns_to_prices(returns, start_date=start_date,
                                            instrument_id=instrument_id)
    output_path = Path(output_path)
    price_path = write_price_file(prices, output_path)
    meta = dict(returns.metadata)
    meta["rows"] = len(prices)
    meta_path = FileUtils.atomic_write_text(
        output_path.with_name(output_path.name + ".meta.json"),
        json.dumps(meta, indent=2) + "\n",
    )
    logger.info("Wrote %d synthetic prices to %s", len(prices), price_path)
    return [price_path, meta_path]


def write_report(report: Dict[str, Any], path: Union[str, Path], schema: str) -> Path:
    """Check, validate and atomically write a report"""
    _check_finite(report)
    validate_report(report, schema)
    return FileUtils.atomic_write_text(path, json.dumps(report, indent=2) + "\n")
