"""
Module core - Pipeline configuration and error types shared by every stage
"""

from dataclasses import dataclass, field, fields, asdict, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from typing_extensions import Literal, Self


class DensityMethod(Enum):
    """Available density estimators"""
    KDE = "kde"
    HISTOGRAM = "histogram"
    ANALYTIC = "analytic"


class WallStrategy(Enum):
    """Available wall detection strategies"""
    POTENTIAL_PEAK = "potential-peak"
    SUPPORT_EDGE = "support-edge"


DEFAULT_TAUS: Tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64, 128, 256)

StrideMode = Literal["1", "tau"]


class BohmianWallsError(ValueError):
    """
    Base class for every domain error raised by the library.
    `kind` is the machine-readable tag echoed in CLI error objects.
    """

    kind = "error"

    def __init__(self, message: str, stage: Optional[str] = None,
                 tau: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.stage = stage
        self.tau = tau

    def with_context(self, stage: Optional[str] = None,
                     tau: Optional[int] = None) -> "BohmianWallsError":
        """Attach pipeline context without overwriting what is already set"""
        if self.stage is None:
            self.stage = stage
        if self.tau is None:
            self.tau = tau
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "message": self.message,
            "stage": self.stage,
            "tau": self.tau,
        }

    def __str__(self) -> str:
        context = []
        if self.stage is not None:
            context.append(f"stage={self.stage}")
        if self.tau is not None:
            context.append(f"tau={self.tau}")
        if context:
            return f"{self.message} ({', '.join(context)})"
        return self.message


class DataIOError(BohmianWallsError):
    kind = "io"


class InsufficientDataError(BohmianWallsError):
    kind = "insufficient_data"


class InvalidPriceError(BohmianWallsError):
    kind = "invalid_price"


class NonMonotonicDatesError(BohmianWallsError):
    kind = "non_monotonic_dates"


class DegenerateDistributionError(BohmianWallsError):
    kind = "degenerate_distribution"


class InsufficientSampleError(BohmianWallsError):
    kind = "insufficient_sample"


class GridError(BohmianWallsError):
    kind = "grid"


class InsufficientTailResolutionError(BohmianWallsError):
    kind = "insufficient_tail_resolution"


class InsufficientScalesError(BohmianWallsError):
    kind = "insufficient_scales"


class EmbeddingError(BohmianWallsError):
    kind = "embedding"


class SynthSpecError(BohmianWallsError):
    kind = "synth_spec"


class ConfigError(BohmianWallsError):
    kind = "config"


class ReportError(BohmianWallsError):
    kind = "report"


@dataclass(frozen=True)
class GridSpec:
    """Uniform evaluation grid: `points` nodes, padded by `pad` sample sigmas"""
    points: int = 1024
    pad: float = 3.0


@dataclass(frozen=True)
class DensityConfig:
    """Density estimation settings"""
    method: DensityMethod = DensityMethod.KDE
    grid: GridSpec = field(default_factory=GridSpec)
    bandwidth: Optional[float] = None  # None -> Silverman 1.06 * sigma * n^(-1/5)
    min_samples: int = 100


@dataclass(frozen=True)
class PotentialConfig:
    """Quantum potential settings (hbar = m = 1 by default)"""
    hbar: float = 1.0
    mass: float = 1.0
    r_floor_rel: float = 1e-6
    negate: bool = False


@dataclass(frozen=True)
class WallConfig:
    """Wall detection settings"""
    strategy: WallStrategy = WallStrategy.POTENTIAL_PEAK
    p_floor_rel: float = 1e-3
    peak_prominence_rel: float = 0.0
    min_side_points: int = 3


@dataclass(frozen=True)
class ScalingConfig:
    """Multi-scale sweep and fit settings"""
    taus: Tuple[int, ...] = DEFAULT_TAUS
    stride: StrideMode = "1"
    piecewise_delta: float = 0.25
    workers: int = 1
    hurst_min_blocks: int = 32

    def stride_for(self, tau: int) -> int:
        """Sampling stride used at scale tau"""
        return tau if self.stride == "tau" else 1


@dataclass(frozen=True)
class PipelineConfig:
    """Full parameter record of the returns -> density -> potential -> walls chain"""
    density: DensityConfig = field(default_factory=DensityConfig)
    potential: PotentialConfig = field(default_factory=PotentialConfig)
    walls: WallConfig = field(default_factory=WallConfig)
    scaling: ScalingConfig = field(default_factory=ScalingConfig)

    def to_dict(self) -> Dict[str, Any]:
        """Plain JSON-ready dictionary (enums as their values)"""
        return _plain(asdict(self))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> Self:
        """Build a config from a (possibly partial) nested dictionary"""
        return cls().merged(data)

    def merged(self, overrides: Dict[str, Any]) -> Self:
        """Return a copy with the nested `overrides` applied on top"""
        if not isinstance(overrides, dict):
            raise ConfigError("configuration must be a JSON object")
        sections = {}
        for section in fields(self):
            current = getattr(self, section.name)
            values = overrides.get(section.name)
            if values is None:
                continue
            sections[section.name] = _merge_section(section.name, current, values)
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"unknown configuration section(s): {sorted(unknown)}")
        return replace(self, **sections)


def _merge_section(name: str, current: Any, values: Any) -> Any:
    if not isinstance(values, dict):
        raise ConfigError(f"section '{name}' must be a JSON object")
    known = {f.name: f for f in fields(current)}
    unknown = set(values) - set(known)
    if unknown:
        raise ConfigError(f"unknown key(s) in '{name}': {sorted(unknown)}")

    updates: Dict[str, Any] = {}
    for key, value in values.items():
        old = getattr(current, key)
        try:
            if isinstance(old, Enum):
                updates[key] = type(old)(value)
            elif isinstance(old, GridSpec):
                updates[key] = _merge_section(f"{name}.{key}", old, value)
            elif key == "taus":
                updates[key] = tuple(int(t) for t in value)
            elif key == "stride":
                updates[key] = str(value)
            elif value is None or isinstance(old, bool):
                updates[key] = value
            elif isinstance(old, int) and not isinstance(old, bool):
                updates[key] = int(value)
            else:
                updates[key] = float(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid value for '{name}.{key}': {value!r}") from exc

    merged = replace(current, **updates)
    validate_section(merged)
    return merged


def validate_section(section: Any) -> None:
    """Check value ranges of one configuration section"""
    if isinstance(section, GridSpec):
        if section.points < 5:
            raise ConfigError("grid.points must be at least 5")
        if section.pad < 0:
            raise ConfigError("grid.pad must be non-negative")
    elif isinstance(section, DensityConfig):
        if section.bandwidth is not None and section.bandwidth <= 0:
            raise ConfigError("density.bandwidth must be positive")
    elif isinstance(section, PotentialConfig):
        if section.hbar <= 0 or section.mass <= 0:
            raise ConfigError("potential.hbar and potential.mass must be positive")
    elif isinstance(section, WallConfig):
        if not 0 < section.p_floor_rel < 1:
            raise ConfigError("walls.p_floor_rel must lie in (0, 1)")
        if not 0 <= section.peak_prominence_rel < 1:
            raise ConfigError("walls.peak_prominence_rel must lie in [0, 1)")
    elif isinstance(section, ScalingConfig):
        if section.stride not in ("1", "tau"):
            raise ConfigError("scaling.stride must be '1' or 'tau'")
        if any(t < 1 for t in section.taus):
            raise ConfigError("scaling.taus must be positive integers")
        if len(set(section.taus)) != len(section.taus):
            raise ConfigError("scaling.taus must be distinct")
        if section.workers < 1:
            raise ConfigError("scaling.workers must be at least 1")
        if section.piecewise_delta < 0:
            raise ConfigError("scaling.piecewise_delta must be non-negative")


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value
