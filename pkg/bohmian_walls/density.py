"""
Module density - Return density estimation on a uniform grid and its amplitude
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from scipy import signal, stats

from .core import (
    DegenerateDistributionError,
    DensityConfig,
    DensityMethod,
    GridError,
    GridSpec,
    InsufficientSampleError,
)
from .market_data import ReturnSeries
from .utils import GridUtils, ValidationUtils

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-6
SILVERMAN_FACTOR = 1.06


@dataclass(frozen=True)
class DensityGrid:
    """Estimated density p(q) on a uniform grid, normalized to unit integral"""
    q: np.ndarray
    p: np.ndarray
    method: DensityMethod
    bandwidth: Optional[float] = None
    n_samples: int = 0

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if q.shape != p.shape:
            raise GridError("density values and grid differ in length")
        GridUtils.spacing(q)
        if np.any(p < 0) or not ValidationUtils.all_finite(p):
            raise GridError("density must be finite and non-negative")
        if abs(GridUtils.integrate(q, p) - 1.0) > NORMALIZATION_TOLERANCE:
            raise GridError("density is not normalized to unit integral")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def spacing(self) -> float:
        return float((self.q[-1] - self.q[0]) / (self.q.size - 1))

    @property
    def points(self) -> int:
        return int(self.q.size)

    def integral(self) -> float:
        return GridUtils.integrate(self.q, self.p)


@dataclass(frozen=True)
class Amplitude:
    """Probability amplitude R(q) = sqrt(p(q))"""
    q: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        if np.any(np.asarray(self.R) < 0):
            raise GridError("amplitude must be non-negative")

    def norm(self) -> float:
        """Trapezoid integral of R^2"""
        return GridUtils.integrate(self.q, self.R ** 2)


def silverman_bandwidth(values: np.ndarray) -> float:
    """Silverman's rule of thumb 1.06 * sigma * n^(-1/5)"""
    values = np.asarray(values, dtype=float)
    return SILVERMAN_FACTOR * ValidationUtils.sample_sigma(values) * values.size ** (-0.2)


def sample_grid(values: np.ndarray, grid_spec: GridSpec) -> np.ndarray:
    """Uniform grid spanning [min - pad*sigma, max + pad*sigma]"""
    sigma = ValidationUtils.sample_sigma(values)
    return GridUtils.uniform_grid(values.min() - grid_spec.pad * sigma,
                                  values.max() + grid_spec.pad * sigma,
                                  grid_spec.points)


def _linear_binning(values: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Spread each sample over its two neighbouring grid nodes"""
    h = (q[-1] - q[0]) / (q.size - 1)
    position = (values - q[0]) / h
    left = np.clip(np.floor(position).astype(np.int64), 0, q.size - 2)
    weight_right = np.clip(position - left, 0.0, 1.0)
    counts = np.bincount(left, weights=1.0 - weight_right, minlength=q.size)
    counts += np.bincount(left + 1, weights=weight_right, minlength=q.size)
    return counts


def _kde(values: np.ndarray, q: np.ndarray, bandwidth: float) -> np.ndarray:
    """Gaussian-kernel KDE of binned counts, evaluated by FFT convolution"""
    h = (q[-1] - q[0]) / (q.size - 1)
    counts = _linear_binning(values, q)
    offsets = h * np.arange(-(q.size - 1), q.size)
    kernel = stats.norm.pdf(offsets, scale=bandwidth)
    p = signal.fftconvolve(counts, kernel, mode="same") / values.size
    return np.maximum(p, 0.0)


def _histogram(values: np.ndarray, q: np.ndarray, bandwidth: float) -> np.ndarray:
    """Freedman-Diaconis histogram resampled onto the grid"""
    q75, q25 = np.percentile(values, [75, 25])
    rule = "fd" if q75 > q25 else "sturges"
    edges = np.histogram_bin_edges(values, bins=rule)
    heights, edges = np.histogram(values, bins=edges, density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return np.interp(q, centers, heights, left=0.0, right=0.0)


_ESTIMATORS: Dict[DensityMethod, Callable[[np.ndarray, np.ndarray, float], np.ndarray]] = {
    DensityMethod.KDE: _kde,
    DensityMethod.HISTOGRAM: _histogram,
}


def estimate_density(sample: ReturnSeries,
                     method: DensityMethod = DensityMethod.KDE,
                     grid_spec: Optional[GridSpec] = None,
                     bandwidth: Optional[float] = None,
                     min_samples: int = 100,
                     grid: Optional[np.ndarray] = None) -> DensityGrid:
    """
    Estimate p(q) of a return sample on a uniform grid.
    KDE uses a Gaussian kernel with Silverman bandwidth unless `bandwidth`
    is given; the histogram uses Freedman-Diaconis bins. An explicit `grid`
    replaces the padded sample grid and must cover every sample.
    """
    grid_spec = grid_spec or GridSpec()
    values = sample.values
    if values.size < min_samples:
        raise InsufficientSampleError(
            f"insufficient sample: {values.size} returns, need at least {min_samples}",
            stage="density", tau=sample.scale_tau,
        )
    if ValidationUtils.is_degenerate(values):
        raise DegenerateDistributionError("degenerate distribution: sample has zero variance",
                                          stage="density", tau=sample.scale_tau)
    if method not in _ESTIMATORS:
        raise GridError(f"unsupported estimator for samples: {method.value}", stage="density")

    if grid is None:
        q = sample_grid(values, grid_spec)
    else:
        q = np.asarray(grid, dtype=float)
        GridUtils.spacing(q)
        if values.min() < q[0] or values.max() > q[-1]:
            raise GridError("grid does not cover the sample", stage="density",
                            tau=sample.scale_tau)
    h = bandwidth if bandwidth is not None else silverman_bandwidth(values)
    raw = _ESTIMATORS[method](values, q, h)
    p = GridUtils.normalize(q, raw)
    logger.debug("Estimated %s density at tau=%d: n=%d, bandwidth=%.6g, grid step=%.6g",
                 method.value, sample.scale_tau, values.size, h, q[1] - q[0])
    return DensityGrid(q, p, method, h if method is DensityMethod.KDE else None, int(values.size))


def estimate_from_config(sample: ReturnSeries, config: DensityConfig,
                         grid: Optional[np.ndarray] = None) -> DensityGrid:
    return estimate_density(sample, config.method, config.grid, config.bandwidth,
                            config.min_samples, grid)


def shared_grid(anchor: ReturnSeries, others: Sequence[ReturnSeries],
                grid_spec: GridSpec) -> np.ndarray:
    """
    Grid for overlaying densities: the anchor's own sample grid when it
    covers every other sample, else one grid padded around all of them
    """
    q = sample_grid(anchor.values, grid_spec)
    if all(s.values.min() >= q[0] and s.values.max() <= q[-1] for s in others):
        return q
    logger.warning("Anchor grid does not cover every sample; widening the shared grid")
    samples = [anchor, *others]
    values = np.concatenate([s.values for s in samples])
    sigma = max(ValidationUtils.sample_sigma(s.values) for s in samples)
    return GridUtils.uniform_grid(values.min() - grid_spec.pad * sigma,
                                  values.max() + grid_spec.pad * sigma,
                                  grid_spec.points)


def density_from_pdf(q: np.ndarray, p: np.ndarray) -> DensityGrid:
    """Wrap a closed-form pdf sampled on a uniform grid, renormalized on that grid"""
    q = np.asarray(q, dtype=float)
    p = np.maximum(np.asarray(p, dtype=float), 0.0)
    return DensityGrid(q, GridUtils.normalize(q, p), DensityMethod.ANALYTIC)


def gaussian_density(mu: float, sigma: float, q: np.ndarray) -> DensityGrid:
    return density_from_pdf(q, stats.norm.pdf(q, loc=mu, scale=sigma))


def amplitude(density: DensityGrid) -> Amplitude:
    """R_i = sqrt(p_i) on the same grid"""
    return Amplitude(density.q, np.sqrt(density.p))
