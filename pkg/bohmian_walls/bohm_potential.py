"""
Module bohm_potential - Quantum potential U = hbar^2 R'' / (2 m R) of an amplitude
"""

import logging
from dataclasses import dataclass

import numpy as np

from .core import GridError, PotentialConfig
from .density import Amplitude
from .utils import GridUtils

logger = logging.getLogger(__name__)

MIN_GRID_POINTS = 5
R_FLOOR_REL = 1e-6


@dataclass(frozen=True)
class PotentialCurve:
    """
    U(q) on the amplitude grid. `valid` masks the points where U is
    defined; U is NaN elsewhere.
    """
    q: np.ndarray
    U: np.ndarray
    valid: np.ndarray
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.q.shape == self.U.shape == self.valid.shape):
            raise GridError("potential arrays differ in length")
        if not np.all(np.isfinite(self.U[self.valid])):
            raise GridError("potential must be finite on every valid point")

    @property
    def valid_count(self) -> int:
        return int(np.count_nonzero(self.valid))

    def negated(self) -> "PotentialCurve":
        U = np.where(self.valid, -self.U, np.nan)
        return PotentialCurve(self.q, U, self.valid, self.hbar, self.mass)


def second_difference(values: np.ndarray, h: float) -> np.ndarray:
    """Central second difference on interior points, NaN at both ends"""
    out = np.full(values.shape, np.nan)
    out[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / (h * h)
    return out


def quantum_potential(amp: Amplitude, hbar: float = 1.0, mass: float = 1.0,
                      negate: bool = False, r_floor_rel: float = R_FLOOR_REL) -> PotentialCurve:
    """
    U_i = (hbar^2 / 2m) * R''_i / R_i with central differences.
    Points with R_i <= r_floor_rel * max(R) and both endpoints are masked.
    """
    if amp.q.size < MIN_GRID_POINTS:
        raise GridError(f"grid too short: {amp.q.size} points, need at least {MIN_GRID_POINTS}",
                        stage="potential")
    if hbar <= 0 or mass <= 0:
        raise GridError("hbar and mass must be positive", stage="potential")
    h = GridUtils.spacing(amp.q)
    R = amp.R

    valid = R > r_floor_rel * R.max()
    valid[0] = valid[-1] = False

    curvature = second_difference(R, h)
    U = np.full(R.shape, np.nan)
    U[valid] = (hbar * hbar / (2.0 * mass)) * curvature[valid] / R[valid]
    if negate:
        U[valid] = -U[valid]
    logger.debug("Quantum potential: %d of %d grid points valid", int(valid.sum()), R.size)
    return PotentialCurve(amp.q, U, valid, hbar, mass)


def potential_from_config(amp: Amplitude, config: PotentialConfig) -> PotentialCurve:
    return quantum_potential(amp, config.hbar, config.mass, config.negate, config.r_floor_rel)


def analytic_gaussian_potential(mu: float, sigma: float, grid: np.ndarray,
                                hbar: float = 1.0, mass: float = 1.0) -> PotentialCurve:
    """
    Closed form for a normal density with hbar = m = 1:
    U(q) = (q - mu)^2 / (8 sigma^4) - 1 / (4 sigma^2), scaled by hbar^2 / m.
    """
    if sigma <= 0:
        raise GridError("sigma must be positive")
    q = np.asarray(grid, dtype=float)
    U = (hbar * hbar / mass) * ((q - mu) ** 2 / (8.0 * sigma ** 4) - 1.0 / (4.0 * sigma ** 2))
    return PotentialCurve(q, U, np.ones(q.shape, dtype=bool), hbar, mass)
