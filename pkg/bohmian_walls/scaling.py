"""
Module scaling - Wall width across time scales, power-law fits and a Hurst estimator
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bohm_potential import PotentialCurve, potential_from_config
from .core import (
    BohmianWallsError,
    InsufficientDataError,
    InsufficientScalesError,
    PipelineConfig,
)
from .density import DensityGrid, amplitude, estimate_from_config
from .market_data import PriceSeries, ReturnSeries, log_returns, return_count
from .utils import FitUtils
from .walls import WallPair, walls_from_config

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 4
MIN_PIECEWISE_POINTS = 6
MIN_SEGMENT_POINTS = 2
MIN_HURST_SAMPLES = 1000


@dataclass(frozen=True)
class ScaleResult:
    """Everything the pipeline produced at one time scale"""
    tau: int
    n_samples: int
    density: DensityGrid
    potential: PotentialCurve
    walls: WallPair

    @property
    def width(self) -> float:
        return self.walls.width

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tau": self.tau,
            "n_samples": self.n_samples,
            "bandwidth": self.density.bandwidth,
            "mode": self.walls.mode,
            "wall_pair": self.walls.to_dict(),
            "width": float(self.width),
        }


@dataclass(frozen=True)
class WidthCurve:
    """Wall width Delta(tau) points plus the configuration that produced them"""
    points: Tuple[Tuple[int, float], ...]
    pipeline_config: Dict[str, Any] = field(default_factory=dict)
    results: Tuple[ScaleResult, ...] = field(default=(), compare=False)
    failures: Tuple[Dict[str, Any], ...] = ()

    def __post_init__(self):
        taus = [t for t, _ in self.points]
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise InsufficientScalesError("width curve taus must be strictly increasing")
        if any(not w > 0 for _, w in self.points):
            raise InsufficientScalesError("width curve widths must be positive")

    @classmethod
    def from_points(cls, taus: Sequence[int], widths: Sequence[float]) -> "WidthCurve":
        return cls(tuple((int(t), float(w)) for t, w in zip(taus, widths)))

    @property
    def taus(self) -> np.ndarray:
        return np.array([t for t, _ in self.points], dtype=float)

    @property
    def widths(self) -> np.ndarray:
        return np.array([w for _, w in self.points], dtype=float)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class ScalingFit:
    """ln(width) = intercept + slope * ln(tau)"""
    slope: float
    intercept: float
    r_squared: float
    residuals: np.ndarray

    @property
    def sse(self) -> float:
        return float(np.sum(self.residuals ** 2))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "residuals": [float(r) for r in self.residuals],
        }


@dataclass(frozen=True)
class PiecewiseFit:
    """Two independent log-log segments split after `breakpoint_tau`"""
    breakpoint_tau: int
    slope_pre: float
    slope_post: float
    intercept_pre: float
    intercept_post: float
    sse_total: float
    sse_single: float
    preferred: bool
    candidates: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "breakpoint_tau": self.breakpoint_tau,
            "slope_pre": self.slope_pre,
            "slope_post": self.slope_post,
            "intercept_pre": self.intercept_pre,
            "intercept_post": self.intercept_post,
            "sse_total": self.sse_total,
            "sse_single": self.sse_single,
            "preferred": self.preferred,
        }


def analyze_returns(returns: ReturnSeries, config: PipelineConfig,
                    grid: Optional[np.ndarray] = None) -> ScaleResult:
    """returns -> density -> amplitude -> quantum potential -> walls"""
    tau = returns.scale_tau
    try:
        dens = estimate_from_config(returns, config.density, grid)
        pot = potential_from_config(amplitude(dens), config.potential)
        pair = walls_from_config(pot, dens, config.walls)
    except BohmianWallsError as exc:
        raise exc.with_context(tau=tau)
    return ScaleResult(tau, returns.n, dens, pot, pair)


class ScaleRunner:
    """
    Runs the per-scale pipeline over a set of taus, optionally on a thread
    pool, and reports progress through bound callbacks
    """

    EVENTS = ("tau_started", "tau_completed", "tau_failed")

    def __init__(self, config: Optional[PipelineConfig] = None):
        self.config = config or PipelineConfig()
        self._callbacks: Dict[str, List[Callable]] = {event: [] for event in self.EVENTS}

    def bind_callback(self, event_type: str, callback: Callable):
        """Bind a callback function to a pipeline event"""
        if event_type not in self._callbacks:
            raise ValueError(f"Unknown event: {event_type}")
        self._callbacks[event_type].append(callback)

    def trigger_callback(self, event_type: str, *args, **kwargs):
        """Trigger all callbacks for an event type"""
        for callback in self._callbacks.get(event_type, []):
            try:
                callback(*args, **kwargs)
            except Exception:
                logger.exception("Error in %s callback", event_type)

    def run_scale(self, series: PriceSeries, tau: int) -> ScaleResult:
        """Full pipeline at one scale"""
        self.trigger_callback("tau_started", tau)
        stride = self.config.scaling.stride_for(tau)
        available = return_count(len(series), tau, stride)
        if available < self.config.density.min_samples:
            raise InsufficientDataError(
                f"tau={tau} leaves {available} returns, need at least "
                f"{self.config.density.min_samples}",
                stage="returns", tau=tau,
            )
        returns = log_returns(series, tau, stride)
        return analyze_returns(returns, self.config)

    def _attempt(self, series: PriceSeries, tau: int):
        try:
            result = self.run_scale(series, tau)
        except BohmianWallsError as exc:
            exc.with_context(tau=tau)
            logger.warning("Omitting tau=%d: %s", tau, exc)
            self.trigger_callback("tau_failed", tau, exc)
            return tau, exc
        self.trigger_callback("tau_completed", tau, result)
        return tau, result

    def run(self, series: PriceSeries, taus: Optional[Sequence[int]] = None) -> WidthCurve:
        """Width curve over `taus` (default: the configured scale set)"""
        taus = sorted(set(int(t) for t in (taus if taus is not None else self.config.scaling.taus)))
        workers = self.config.scaling.workers
        if workers > 1 and len(taus) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(lambda t: self._attempt(series, t), taus))
        else:
            outcomes = [self._attempt(series, t) for t in taus]

        results = [r for _, r in outcomes if isinstance(r, ScaleResult)]
        failures = tuple(
            {"tau": t, "kind": r.kind, "message": r.message}
            for t, r in outcomes if isinstance(r, BohmianWallsError)
        )
        if len(results) < MIN_FIT_POINTS:
            raise InsufficientScalesError(
                f"only {len(results)} scale(s) succeeded, need at least {MIN_FIT_POINTS}",
                stage="scaling",
            )
        logger.info("Width curve for %s: %d scale(s), %d omitted",
                    series.instrument_id, len(results), len(failures))
        return WidthCurve(
            tuple((r.tau, float(r.width)) for r in results),
            self.config.to_dict(),
            tuple(results),
            failures,
        )


def compute_width_curve(series: PriceSeries, taus: Optional[Sequence[int]] = None,
                        pipeline: Optional[PipelineConfig] = None) -> WidthCurve:
    """Run the wall pipeline at every tau; failing scales are omitted with a warning"""
    return ScaleRunner(pipeline).run(series, taus)


def fit_scaling(curve: WidthCurve) -> ScalingFit:
    """OLS of ln(width) on ln(tau)"""
    if len(curve) < MIN_FIT_POINTS:
        raise InsufficientScalesError(
            f"scaling fit needs at least {MIN_FIT_POINTS} points, got {len(curve)}", stage="fit")
    line = FitUtils.ols_loglog(curve.taus, curve.widths)
    return ScalingFit(line.slope, line.intercept, line.r_squared, line.residuals)


def piecewise_candidates(count: int) -> List[int]:
    """Split positions k (pre = points[:k]) leaving at least two points per segment"""
    return list(range(MIN_SEGMENT_POINTS, count - MIN_SEGMENT_POINTS + 1))


def fit_piecewise(curve: WidthCurve, delta: float = 0.25) -> PiecewiseFit:
    """
    Exhaustive breakpoint search: two independent log-log OLS segments per
    candidate, breakpoint at the minimum total SSE. The split is preferred
    when the single-line SSE exceeds it by a factor of at least 1 + delta.
    """
    if len(curve) < MIN_PIECEWISE_POINTS:
        raise InsufficientScalesError(
            f"piecewise fit needs at least {MIN_PIECEWISE_POINTS} points, got {len(curve)}",
            stage="fit")
    x = np.log(curve.taus)
    y = np.log(curve.widths)
    single = FitUtils.ols(x, y)

    best = None
    candidates = piecewise_candidates(len(curve))
    for k in candidates:
        pre = FitUtils.ols(x[:k], y[:k])
        post = FitUtils.ols(x[k:], y[k:])
        total = pre.sse + post.sse
        if best is None or total < best[0]:
            best = (total, k, pre, post)

    total, k, pre, post = best
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    resolvable = single.sse > 1e-12 * max(ss_tot, 1.0)
    preferred = bool(resolvable and single.sse >= (1.0 + delta) * total)
    logger.debug("Piecewise fit: breakpoint tau=%d, SSE %.3g vs single %.3g",
                 int(curve.taus[k - 1]), total, single.sse)
    return PiecewiseFit(
        breakpoint_tau=int(curve.taus[k - 1]),
        slope_pre=pre.slope,
        slope_post=post.slope,
        intercept_pre=pre.intercept,
        intercept_post=post.intercept,
        sse_total=float(total),
        sse_single=single.sse,
        preferred=preferred,
        candidates=len(candidates),
    )


def hurst_scaling_points(series: ReturnSeries,
                         min_blocks: int = 32) -> Tuple[np.ndarray, np.ndarray]:
    """Dyadic block sizes m and the variance of the block means at each m"""
    values = series.values
    sizes = []
    variances = []
    m = 1
    while values.size // m >= min_blocks:
        blocks = values.size // m
        means = values[:blocks * m].reshape(blocks, m).mean(axis=1)
        sizes.append(m)
        variances.append(np.var(means, ddof=1))
        m *= 2
    return np.array(sizes, dtype=float), np.array(variances, dtype=float)


def estimate_hurst(series: ReturnSeries, min_blocks: int = 32) -> float:
    """Aggregated-variance estimator: H = 1 + slope / 2"""
    if series.n < MIN_HURST_SAMPLES:
        raise InsufficientDataError(
            f"insufficient data for a Hurst estimate: {series.n} returns, need "
            f"{MIN_HURST_SAMPLES}", stage="hurst")
    sizes, variances = hurst_scaling_points(series, min_blocks)
    if sizes.size < 3 or np.any(variances <= 0):
        raise InsufficientDataError("too few usable block sizes for a Hurst estimate",
                                    stage="hurst")
    line = FitUtils.ols_loglog(sizes, variances)
    return 1.0 + line.slope / 2.0
