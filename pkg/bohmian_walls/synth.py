"""
Module synth - Deterministic synthetic return generators (white noise, fGn, Student-t)
"""

import io
import logging
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Union

import numpy as np
import pandas as pd

from .core import DegenerateDistributionError, EmbeddingError, SynthSpecError
from .market_data import PriceSeries, ReturnSeries
from .utils import FileUtils, ValidationUtils

logger = logging.getLogger(__name__)

GENERATOR_NAME = "numpy.random.PCG64"
GENERATOR_VERSION = np.__version__
BASE_PRICE = 100.0
EIGENVALUE_TOLERANCE = 1e-10


class SynthKind(Enum):
    """Available synthetic generators"""
    WHITE = "white"
    FGN = "fgn"
    STUDENT_T = "student-t"


@dataclass(frozen=True)
class SynthSpec:
    """Full, seed-inclusive description of a synthetic return series"""
    kind: SynthKind = SynthKind.WHITE
    n: int = 1 << 16
    sigma: float = 0.01
    hurst: float = 0.5
    seed: int = 0
    df: float = 3.0  # student-t only

    def __post_init__(self):
        if self.n < 2:
            raise SynthSpecError(f"n must be at least 2 (got {self.n})", stage="synth")
        if not self.sigma > 0:
            raise SynthSpecError(f"sigma must be positive (got {self.sigma})", stage="synth")
        if not 0 < self.hurst < 1:
            raise SynthSpecError(f"hurst must lie in (0, 1) (got {self.hurst})", stage="synth")
        if self.kind is SynthKind.STUDENT_T and not self.df > 2:
            raise SynthSpecError(f"df must exceed 2 for a finite variance (got {self.df})",
                                 stage="synth")
        if not 0 <= self.seed < 2 ** 64:
            raise SynthSpecError("seed must be a 64-bit unsigned integer", stage="synth")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["kind"] = self.kind.value
        return data


def make_rng(seed: int) -> np.random.Generator:
    """The pinned generator behind every synthetic series"""
    return np.random.Generator(np.random.PCG64(seed))


def generator_metadata(spec: SynthSpec) -> Dict[str, Any]:
    return {
        "generator": GENERATOR_NAME,
        "numpy_version": GENERATOR_VERSION,
        "spec": spec.to_dict(),
    }


def _as_returns(values: np.ndarray, spec: SynthSpec) -> ReturnSeries:
    return ReturnSeries(1, 1, values, f"synth-{spec.kind.value}", generator_metadata(spec))


def generate_white_noise(spec: SynthSpec) -> ReturnSeries:
    """n iid N(0, sigma^2) draws"""
    if spec.kind is not SynthKind.WHITE:
        raise SynthSpecError(f"expected a white-noise spec, got {spec.kind.value}", stage="synth")
    values = make_rng(spec.seed).normal(0.0, spec.sigma, spec.n)
    return _as_returns(values, spec)


def fgn_autocovariance(k: np.ndarray, hurst: float, sigma: float = 1.0) -> np.ndarray:
    """gamma(k) = sigma^2/2 (|k+1|^2H - 2|k|^2H + |k-1|^2H)"""
    k = np.abs(np.asarray(k, dtype=float))
    two_h = 2.0 * hurst
    return 0.5 * sigma ** 2 * (np.abs(k + 1) ** two_h - 2.0 * k ** two_h + np.abs(k - 1) ** two_h)


def generate_fgn(spec: SynthSpec) -> ReturnSeries:
    """
    Fractional Gaussian noise by circulant embedding of the exact
    autocovariance (Davies-Harte). n must be a power of two.
    """
    if spec.kind is not SynthKind.FGN:
        raise SynthSpecError(f"expected an fgn spec, got {spec.kind.value}", stage="synth")
    n = spec.n
    if not ValidationUtils.is_power_of_two(n):
        raise SynthSpecError(f"fgn needs n to be a power of two (got {n})", stage="synth")

    gamma = fgn_autocovariance(np.arange(n + 1), spec.hurst, spec.sigma)
    row = np.concatenate([gamma, gamma[n - 1:0:-1]])
    eigenvalues = np.fft.fft(row).real
    if eigenvalues.min() < -EIGENVALUE_TOLERANCE * eigenvalues.max():
        raise EmbeddingError(
            f"circulant embedding is not non-negative definite for H={spec.hurst}, n={n} "
            f"(min eigenvalue {eigenvalues.min():.3g})",
            stage="synth",
        )
    eigenvalues = np.clip(eigenvalues, 0.0, None)

    m = row.size
    rng = make_rng(spec.seed)
    noise = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    values = np.fft.fft(np.sqrt(eigenvalues / m) * noise)[:n].real
    return _as_returns(values, spec)


def generate_student_t(spec: SynthSpec) -> ReturnSeries:
    """Student-t draws with `df` degrees of freedom, rescaled to variance sigma^2"""
    if spec.kind is not SynthKind.STUDENT_T:
        raise SynthSpecError(f"expected a student-t spec, got {spec.kind.value}", stage="synth")
    scale = spec.sigma * np.sqrt((spec.df - 2.0) / spec.df)
    values = scale * make_rng(spec.seed).standard_t(spec.df, spec.n)
    return _as_returns(values, spec)


_GENERATORS: Dict[SynthKind, Callable[[SynthSpec], ReturnSeries]] = {
    SynthKind.WHITE: generate_white_noise,
    SynthKind.FGN: generate_fgn,
    SynthKind.STUDENT_T: generate_student_t,
}


def generate(spec: SynthSpec) -> ReturnSeries:
    """Dispatch on spec.kind"""
    logger.debug("Generating %s series: n=%d sigma=%g seed=%d", spec.kind.value, spec.n,
                 spec.sigma, spec.seed)
    return _GENERATORS[spec.kind](spec)


def matched_white_noise(market: ReturnSeries, seed: int) -> ReturnSeries:
    """White noise with the market sample's size and standard deviation"""
    if market.n < 2:
        raise DegenerateDistributionError("market sample needs at least 2 returns",
                                          stage="baseline", tau=market.scale_tau)
    if ValidationUtils.is_degenerate(market.values):
        raise DegenerateDistributionError("degenerate distribution: market sample has zero variance",
                                          stage="baseline", tau=market.scale_tau)
    sigma = market.sigma
    baseline = generate_white_noise(SynthSpec(SynthKind.WHITE, market.n, sigma, seed=seed))
    return ReturnSeries(market.scale_tau, market.stride, baseline.values,
                        f"{market.instrument_id}-white-noise", baseline.metadata)


def returns_to_prices(returns: ReturnSeries, base_price: float = BASE_PRICE,
                      start_date: str = "2000-01-03",
                      instrument_id: Optional[str] = None) -> PriceSeries:
    """prices = base * exp(cumulative sum of returns), one business day apart"""
    growth = np.exp(np.concatenate([[0.0], np.cumsum(returns.values)]))
    try:
        first = np.datetime64(start_date, "D")
    except ValueError as exc:
        raise SynthSpecError(f"invalid start date {start_date!r}", stage="synth") from exc
    dates = np.busday_offset(first, np.arange(growth.size), roll="forward")
    return PriceSeries(instrument_id or returns.instrument_id, dates, base_price * growth)


def price_table(series: PriceSeries) -> str:
    """Delimited text in the layout load_price_series reads"""
    frame = pd.DataFrame({
        "date": np.datetime_as_string(series.dates, unit="D"),
        "price": series.prices,
    })
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format="%.17g", lineterminator="\n")
    return buffer.getvalue()


def write_price_file(series: PriceSeries, path: Union[str, Path]) -> Path:
    """Atomic write of price_table(series)"""
    return FileUtils.atomic_write_text(path, price_table(series))
