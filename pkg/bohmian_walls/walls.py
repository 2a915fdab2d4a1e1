"""
Module walls - The two potential limits bounding probable returns
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy import signal

from .bohm_potential import PotentialCurve
from .core import GridError, InsufficientTailResolutionError, WallConfig, WallStrategy
from .density import DensityGrid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WallPair:
    """Wall locations either side of the density mode"""
    q_minus: float
    q_plus: float
    strategy: WallStrategy
    mode: float
    diagnostics: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.q_minus < self.mode < self.q_plus:
            raise InsufficientTailResolutionError(
                f"walls ({self.q_minus:.6g}, {self.q_plus:.6g}) do not bracket the mode {self.mode:.6g}",
                stage="walls",
            )

    @property
    def width(self) -> float:
        return self.q_plus - self.q_minus

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q_minus": float(self.q_minus),
            "q_plus": float(self.q_plus),
            "width": float(self.width),
            "strategy": self.strategy.value,
            "diagnostics": self.diagnostics,
        }


def density_mode_index(dens: DensityGrid) -> int:
    """Global argmax of p; a plateau mode takes its midpoint index"""
    peak = dens.p.max()
    top = np.flatnonzero(dens.p == peak)
    return int(top[(top.size - 1) // 2])


def reliable_support(dens: DensityGrid, p_floor_rel: float) -> Tuple[int, int]:
    """Outermost grid indices with p >= p_floor_rel * max(p)"""
    above = np.flatnonzero(dens.p >= p_floor_rel * dens.p.max())
    return int(above[0]), int(above[-1])


def _side_indices(mode: int, lo: int, hi: int, valid: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    left = np.arange(lo, mode)
    right = np.arange(mode + 1, hi + 1)
    return left[valid[left]], right[valid[right]]


def _outermost_peak(U: np.ndarray, valid: np.ndarray, mode: int, edge: int,
                    prominence: float) -> Optional[int]:
    """
    Outermost interior local maximum of U between the mode and `edge`.
    Plateaus resolve toward the outer end.
    """
    lo, hi = (mode, edge) if edge > mode else (edge, mode)
    segment = U[lo:hi + 1].copy()
    segment_valid = valid[lo:hi + 1]
    if edge < mode:
        segment = segment[::-1]
        segment_valid = segment_valid[::-1]
    # walk outward from the mode; position 0 is the mode itself
    candidates: List[int] = []
    for k in range(1, segment.size - 1):
        if not (segment_valid[k - 1] and segment_valid[k] and segment_valid[k + 1]):
            continue
        if segment[k] >= segment[k - 1] and segment[k] > segment[k + 1]:
            candidates.append(k)
    if not candidates:
        return None
    if prominence > 0:
        finite = np.where(segment_valid, segment, np.nanmin(segment[segment_valid]))
        prominences = signal.peak_prominences(finite, np.asarray(candidates))[0]
        candidates = [k for k, prom in zip(candidates, prominences) if prom >= prominence]
        if not candidates:
            return None
    k = max(candidates)
    return mode - k if edge < mode else mode + k


def detect_walls(pot: PotentialCurve, dens: DensityGrid,
                 strategy: WallStrategy = WallStrategy.POTENTIAL_PEAK,
                 p_floor_rel: float = 1e-3,
                 peak_prominence_rel: float = 0.0,
                 min_side_points: int = 3) -> WallPair:
    """
    Locate the two walls around the density mode.

    potential-peak: outermost local maximum of U inside the reliable support
    {p >= p_floor_rel * max p}, falling back to the support edge per side.
    support-edge: outermost grid point with p >= p_floor_rel * max p.
    """
    if pot.q.shape != dens.q.shape or not np.allclose(pot.q, dens.q, rtol=0, atol=1e-12 * np.ptp(dens.q)):
        raise GridError("potential and density grids differ", stage="walls")

    mode = density_mode_index(dens)
    lo, hi = reliable_support(dens, p_floor_rel)
    valid = pot.valid
    left, right = _side_indices(mode, 0, pot.q.size - 1, valid)
    for side, idx in (("minus", left), ("plus", right)):
        if idx.size < min_side_points:
            raise InsufficientTailResolutionError(
                f"insufficient tail resolution: {idx.size} valid potential point(s) on the "
                f"{side} side of the mode, need {min_side_points}",
                stage="walls",
            )

    diagnostics: Dict[str, Any] = {
        "mode_index": mode,
        "support": [float(dens.q[lo]), float(dens.q[hi])],
        "p_floor_rel": p_floor_rel,
    }
    if strategy is WallStrategy.SUPPORT_EDGE:
        i_minus, i_plus = lo, hi
        diagnostics["minus"] = {"index": lo, "source": "support-edge"}
        diagnostics["plus"] = {"index": hi, "source": "support-edge"}
    else:
        in_support = valid.copy()
        in_support[:lo] = False
        in_support[hi + 1:] = False
        span = pot.U[in_support]
        prominence = 0.0
        if peak_prominence_rel > 0 and span.size:
            prominence = peak_prominence_rel * float(span.max() - span.min())
        chosen = {}
        for side, edge in (("minus", lo), ("plus", hi)):
            peak = _outermost_peak(pot.U, in_support, mode, edge, prominence)
            if peak is None:
                logger.info("No potential peak on the %s side; falling back to the support edge", side)
                chosen[side] = edge
                diagnostics[side] = {"index": edge, "source": "support-edge-fallback"}
            else:
                chosen[side] = peak
                diagnostics[side] = {"index": peak, "source": "potential-peak"}
        i_minus, i_plus = chosen["minus"], chosen["plus"]

    pair = WallPair(float(pot.q[i_minus]), float(pot.q[i_plus]), strategy,
                    float(dens.q[mode]), diagnostics)
    logger.debug("Walls (%s): %.6g .. %.6g, width %.6g",
                 strategy.value, pair.q_minus, pair.q_plus, pair.width)
    return pair


def walls_from_config(pot: PotentialCurve, dens: DensityGrid, config: WallConfig) -> WallPair:
    return detect_walls(pot, dens, config.strategy, config.p_floor_rel,
                        config.peak_prominence_rel, config.min_side_points)


def wall_width(pair: WallPair) -> float:
    """q_plus - q_minus"""
    return pair.q_plus - pair.q_minus
