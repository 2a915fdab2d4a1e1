"""
Module market_data - Price history ingestion and multi-scale log-returns
"""

import csv
import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from .core import (
    ConfigError,
    DataIOError,
    InsufficientDataError,
    InvalidPriceError,
    NonMonotonicDatesError,
)
from .utils import ValidationUtils

logger = logging.getLogger(__name__)

SUPPORTED_DATE_FORMATS: Tuple[str, ...] = ("%Y-%m-%d", "%d/%m/%Y")
ISO_DATE_PATTERN = r"\d{4}-\d{2}-\d{2}"
NOT_A_DAY = np.datetime64("NaT", "D")


@dataclass(frozen=True)
class FormatSpec:
    """Column mapping and parsing options for a delimited price file"""
    date_column: str = "date"
    price_column: str = "price"
    date_format: Optional[str] = None  # None -> try every supported format
    delimiter: Optional[str] = None  # None -> sniffed by pandas
    instrument_id: Optional[str] = None  # None -> file stem


@dataclass(frozen=True)
class PriceSeries:
    """Dated, strictly positive price observations for one instrument"""
    instrument_id: str
    dates: np.ndarray
    prices: np.ndarray

    def __post_init__(self):
        dates = np.asarray(self.dates, dtype="datetime64[D]")
        prices = np.asarray(self.prices, dtype=float)
        if dates.shape != prices.shape or prices.ndim != 1:
            raise InsufficientDataError("dates and prices must be 1-d arrays of equal length")
        if prices.size < 2:
            raise InsufficientDataError(f"insufficient data: {prices.size} price(s), need at least 2")
        if not np.all(np.isfinite(prices)) or np.any(prices <= 0):
            raise InvalidPriceError("prices must be finite and strictly positive")
        bad = np.flatnonzero(np.diff(dates) <= np.timedelta64(0, "D"))
        if bad.size:
            raise NonMonotonicDatesError(
                f"dates must be strictly increasing; first offending position {bad[0] + 1}"
            )
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "prices", prices)

    def __len__(self) -> int:
        return int(self.prices.size)

    def scaled(self, factor: float) -> "PriceSeries":
        """Same series with every price multiplied by `factor`"""
        return PriceSeries(self.instrument_id, self.dates, self.prices * factor)


@dataclass(frozen=True)
class ReturnSeries:
    """Log-returns q at integer time scale tau, sampled every `stride` periods"""
    scale_tau: int
    stride: int
    values: np.ndarray
    instrument_id: str = ""
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise InsufficientDataError("return values must be one-dimensional")
        if not ValidationUtils.all_finite(values):
            raise InsufficientDataError("return values must be finite")
        if self.scale_tau < 1 or self.stride < 1:
            raise ConfigError("scale_tau and stride must be positive integers")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def sigma(self) -> float:
        return ValidationUtils.sample_sigma(self.values)

    def scaled(self, factor: float) -> "ReturnSeries":
        """Same sample with every return multiplied by `factor`"""
        return ReturnSeries(self.scale_tau, self.stride, self.values * factor,
                            self.instrument_id, dict(self.metadata))


def _strptime_days(text: np.ndarray, date_format: str) -> np.ndarray:
    """Day-resolution dates, NaT where `date_format` does not match"""
    def parse(value: str) -> np.datetime64:
        try:
            return np.datetime64(datetime.strptime(value, date_format).date(), "D")
        except ValueError:
            return NOT_A_DAY

    uniques, inverse = np.unique(text, return_inverse=True)
    parsed = np.array([parse(value) for value in uniques], dtype="datetime64[D]")
    return parsed[inverse.reshape(-1)]


def _parse_days(raw: pd.Series, date_format: str) -> np.ndarray:
    # day resolution throughout; pandas Timestamps stop at 2262
    text = raw.astype(str).str.strip()
    values = text.to_numpy(dtype=str)
    if date_format == "%Y-%m-%d" and bool(text.str.fullmatch(ISO_DATE_PATTERN).all()):
        try:
            return values.astype("datetime64[D]")
        except ValueError:
            pass
    return _strptime_days(values, date_format)


def _parse_dates(raw: pd.Series, date_format: Optional[str]) -> np.ndarray:
    if date_format is not None:
        return _parse_days(raw, date_format)
    best = None
    for fmt in SUPPORTED_DATE_FORMATS:
        parsed = _parse_days(raw, fmt)
        if best is None or np.count_nonzero(~np.isnat(parsed)) > np.count_nonzero(~np.isnat(best)):
            best = parsed
        if not np.isnat(best).any():
            break
    return best


def load_price_series(path: Union[str, Path],
                      format_spec: Optional[FormatSpec] = None) -> Tuple[PriceSeries, int]:
    """
    Read a delimited price file with one header row.
    Rows with a missing or unparsable date, or a missing, unparsable or
    non-positive price, are dropped. Returns the series and the drop count.
    """
    spec = format_spec or FormatSpec()
    path = Path(path)
    if not path.is_file():
        raise DataIOError(f"cannot read price file: {path} does not exist", stage="load")

    try:
        if spec.delimiter is None:
            frame = pd.read_csv(path, sep=None, engine="python", dtype=str,
                                keep_default_na=False, skipinitialspace=True)
        else:
            frame = pd.read_csv(path, sep=spec.delimiter, dtype=str, keep_default_na=False,
                                skipinitialspace=True)
    except (OSError, UnicodeDecodeError, csv.Error, pd.errors.ParserError,
            pd.errors.EmptyDataError) as exc:
        raise DataIOError(f"cannot read price file {path}: {exc}", stage="load") from exc

    frame.columns = [str(c).strip() for c in frame.columns]
    for column in (spec.date_column, spec.price_column):
        if column not in frame.columns:
            raise DataIOError(
                f"column '{column}' not found in {path} (columns: {list(frame.columns)})",
                stage="load",
            )

    dates = _parse_dates(frame[spec.date_column], spec.date_format)
    prices = pd.to_numeric(frame[spec.price_column].str.strip(), errors="coerce").to_numpy(
        dtype=float, na_value=np.nan)
    keep = ~np.isnat(dates) & np.isfinite(prices) & (prices > 0)
    dropped = int(np.count_nonzero(~keep))
    if dropped:
        logger.warning("Dropped %d row(s) with missing, unparsable or non-positive values from %s",
                       dropped, path)

    kept_dates = dates[keep]
    kept_prices = prices[keep]
    # header is file line 1, first data row is line 2
    file_lines = np.flatnonzero(keep) + 2

    if kept_prices.size < 2:
        raise InsufficientDataError(
            f"insufficient data: {kept_prices.size} valid row(s) in {path}, need at least 2",
            stage="load",
        )
    bad = np.flatnonzero(np.diff(kept_dates) <= np.timedelta64(0, "D"))
    if bad.size:
        line = int(file_lines[bad[0] + 1])
        raise NonMonotonicDatesError(
            f"dates are not strictly increasing at line {line} of {path} "
            f"({kept_dates[bad[0] + 1]} follows {kept_dates[bad[0]]})",
            stage="load",
        )

    instrument_id = spec.instrument_id or path.stem
    series = PriceSeries(instrument_id, kept_dates, kept_prices)
    logger.debug("Loaded %d prices for %s (%d dropped)", len(series), instrument_id, dropped)
    return series, dropped


def return_count(length: int, tau: int, stride: int) -> int:
    """Number of returns at scale tau and given stride from `length` prices"""
    if length <= tau:
        return 0
    return (length - 1 - tau) // stride + 1


def log_returns(series: PriceSeries, tau: int = 1, stride: int = 1) -> ReturnSeries:
    """values[k] = ln(prices[k*stride + tau] / prices[k*stride])"""
    if tau < 1 or stride < 1:
        raise ConfigError(f"tau and stride must be positive integers (tau={tau}, stride={stride})",
                          stage="returns", tau=tau)
    if tau >= len(series):
        raise InsufficientDataError(
            f"tau={tau} needs more than {tau} prices, series has {len(series)}",
            stage="returns", tau=tau,
        )
    log_prices = np.log(series.prices)
    start = np.arange(0, len(series) - tau, stride)
    values = log_prices[start + tau] - log_prices[start]
    return ReturnSeries(tau, stride, values, series.instrument_id)
