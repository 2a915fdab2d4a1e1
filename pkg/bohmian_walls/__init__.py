"""
BohmianWalls - Quantum potential of financial return distributions

Estimates the density of log-returns at many time scales, turns it into
a Bohmian quantum potential, locates the two walls that bound probable
returns, and fits how the distance between them scales with time.

Version: 1.0.0
Author: BohmianWalls Team
"""

__version__ = "1.0.0"
__author__ = "BohmianWalls Team"

# Core imports
from .core import (
    BohmianWallsError,
    ConfigError,
    DataIOError,
    DegenerateDistributionError,
    DensityConfig,
    DensityMethod,
    EmbeddingError,
    GridError,
    GridSpec,
    InsufficientDataError,
    InsufficientSampleError,
    InsufficientScalesError,
    InsufficientTailResolutionError,
    InvalidPriceError,
    NonMonotonicDatesError,
    PipelineConfig,
    PotentialConfig,
    ReportError,
    ScalingConfig,
    SynthSpecError,
    WallConfig,
    WallStrategy,
)
from .utils import FileUtils, FitUtils, GridUtils, ValidationUtils

# Pipeline stages
from .market_data import FormatSpec, PriceSeries, ReturnSeries, load_price_series, log_returns
from .density import (
    Amplitude,
    DensityGrid,
    amplitude,
    density_from_pdf,
    estimate_density,
    gaussian_density,
)
from .bohm_potential import PotentialCurve, analytic_gaussian_potential, quantum_potential
from .walls import WallPair, density_mode_index, detect_walls, reliable_support, wall_width
from .scaling import (
    PiecewiseFit,
    ScaleResult,
    ScaleRunner,
    ScalingFit,
    WidthCurve,
    compute_width_curve,
    estimate_hurst,
    fit_piecewise,
    fit_scaling,
)
from .synth import (
    SynthKind,
    SynthSpec,
    generate,
    generate_fgn,
    generate_student_t,
    generate_white_noise,
    matched_white_noise,
    returns_to_prices,
)
from .report import (
    AnalysisReport,
    Comparison,
    compare_with_white_noise,
    run_analysis,
    run_comparison,
    run_synth,
    validate_report,
)

__all__ = [
    "BohmianWallsError", "ConfigError", "DataIOError", "DegenerateDistributionError",
    "EmbeddingError", "GridError", "InsufficientDataError", "InsufficientSampleError",
    "InsufficientScalesError", "InsufficientTailResolutionError", "InvalidPriceError",
    "NonMonotonicDatesError",
    "ReportError", "SynthSpecError",
    "DensityConfig", "DensityMethod", "GridSpec", "PipelineConfig", "PotentialConfig",
    "ScalingConfig", "WallConfig", "WallStrategy",
    "FileUtils", "FitUtils", "GridUtils", "ValidationUtils",
    "FormatSpec", "PriceSeries", "ReturnSeries", "load_price_series", "log_returns",
    "Amplitude", "DensityGrid", "amplitude", "density_from_pdf", "estimate_density",
    "gaussian_density",
    "PotentialCurve", "analytic_gaussian_potential", "quantum_potential",
    "WallPair", "density_mode_index", "detect_walls", "reliable_support", "wall_width",
    "PiecewiseFit", "ScaleResult", "ScaleRunner", "ScalingFit", "WidthCurve",
    "compute_width_curve", "estimate_hurst", "fit_piecewise", "fit_scaling",
    "SynthKind", "SynthSpec", "generate", "generate_fgn", "generate_student_t",
    "generate_white_noise", "matched_white_noise", "returns_to_prices",
    "AnalysisReport", "Comparison", "compare_with_white_noise", "run_analysis",
    "run_comparison", "run_synth", "validate_report",
]
