"""
Module utils - Shared numerical, validation and file utilities
"""

import hashlib
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np
from scipy import stats
from scipy.integrate import trapezoid

from .core import GridError, InsufficientScalesError


class GridUtils:
    """Utilities for uniform one-dimensional grids"""

    UNIFORMITY_TOLERANCE = 1e-9

    @staticmethod
    def uniform_grid(start: float, stop: float, points: int) -> np.ndarray:
        """Uniform grid with `points` nodes on [start, stop]"""
        if points < 2 or not stop > start:
            raise GridError(f"cannot build a grid of {points} points on [{start}, {stop}]")
        return np.linspace(start, stop, points)

    @staticmethod
    def spacing(q: np.ndarray) -> float:
        """Grid step of a uniform grid, checking uniformity within 1 part in 1e9"""
        q = np.asarray(q, dtype=float)
        if q.ndim != 1 or q.size < 2:
            raise GridError("grid must be one-dimensional with at least 2 points")
        steps = np.diff(q)
        h = (q[-1] - q[0]) / (q.size - 1)
        if h <= 0 or np.any(steps <= 0):
            raise GridError("grid must be strictly increasing")
        if np.max(np.abs(steps - h)) > GridUtils.UNIFORMITY_TOLERANCE * h:
            raise GridError("grid spacing is not uniform")
        return float(h)

    @staticmethod
    def integrate(q: np.ndarray, values: np.ndarray) -> float:
        """Trapezoid integral of `values` over the grid"""
        return float(trapezoid(values, q))

    @staticmethod
    def normalize(q: np.ndarray, values: np.ndarray) -> np.ndarray:
        """Rescale `values` to unit trapezoid integral"""
        total = GridUtils.integrate(q, values)
        if not total > 0:
            raise GridError("cannot normalize a function with non-positive integral")
        return values / total


class ValidationUtils:
    """Utilities for argument validation"""

    @staticmethod
    def is_power_of_two(n: int) -> bool:
        return n > 0 and (n & (n - 1)) == 0

    @staticmethod
    def all_finite(values: np.ndarray) -> bool:
        return bool(np.all(np.isfinite(values)))

    @staticmethod
    def sample_sigma(values: np.ndarray) -> float:
        """Sample standard deviation (ddof=1), 0.0 for fewer than 2 values"""
        values = np.asarray(values, dtype=float)
        if values.size < 2:
            return 0.0
        return float(np.std(values, ddof=1))

    @staticmethod
    def is_degenerate(values: np.ndarray, rel_tol: float = 1e-12) -> bool:
        """True when the spread of `values` is round-off relative to their magnitude"""
        values = np.asarray(values, dtype=float)
        if values.size < 2:
            return True
        scale = max(1.0, float(np.max(np.abs(values))))
        return float(np.ptp(values)) <= rel_tol * scale


@dataclass
class LineFit:
    """Ordinary least squares line y = intercept + slope * x"""
    slope: float
    intercept: float
    r_squared: float
    residuals: np.ndarray

    @property
    def sse(self) -> float:
        return float(np.sum(self.residuals ** 2))


class FitUtils:
    """Least-squares helpers for log-log fitting"""

    @staticmethod
    def ols(x: Sequence[float], y: Sequence[float]) -> LineFit:
        """Fit y on x by ordinary least squares"""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.size < 2 or np.ptp(x) == 0:
            raise InsufficientScalesError("degenerate regression: need at least two distinct x values")
        result = stats.linregress(x, y)
        residuals = y - (result.intercept + result.slope * x)
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        if ss_tot == 0:
            r_squared = 1.0
        else:
            r_squared = 1.0 - float(np.sum(residuals ** 2)) / ss_tot
        r_squared = min(max(r_squared, 0.0), 1.0)
        return LineFit(float(result.slope), float(result.intercept), r_squared, residuals)

    @staticmethod
    def ols_loglog(x: Sequence[float], y: Sequence[float]) -> LineFit:
        """Fit ln(y) on ln(x)"""
        return FitUtils.ols(np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float)))


class FileUtils:
    """File helpers: checksums and atomic writes"""

    @staticmethod
    def sha256(path: Union[str, Path]) -> str:
        digest = hashlib.sha256()
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                digest.update(chunk)
        return digest.hexdigest()

    @staticmethod
    def atomic_write_text(path: Union[str, Path], text: str) -> Path:
        """Write `text` to a temporary sibling file, then rename it over `path`"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        return path
