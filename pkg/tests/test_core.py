"""
Unit tests for the core module
"""

import unittest
import sys
import os

# Add library path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from bohmian_walls.core import (
    BohmianWallsError,
    ConfigError,
    DataIOError,
    DensityConfig,
    DensityMethod,
    GridSpec,
    InsufficientScalesError,
    InsufficientTailResolutionError,
    InvalidPriceError,
    PipelineConfig,
    ScalingConfig,
    WallConfig,
    WallStrategy,
)


class TestPipelineConfig(unittest.TestCase):
    """Tests for PipelineConfig and its sections"""

    def test_default_config(self):
        """Test default configuration values"""
        config = PipelineConfig()
        self.assertEqual(config.density.method, DensityMethod.KDE)
        self.assertEqual(config.density.grid, GridSpec(1024, 3.0))
        self.assertIsNone(config.density.bandwidth)
        self.assertEqual(config.density.min_samples, 100)
        self.assertEqual(config.potential.hbar, 1.0)
        self.assertEqual(config.potential.mass, 1.0)
        self.assertFalse(config.potential.negate)
        self.assertEqual(config.walls.strategy, WallStrategy.POTENTIAL_PEAK)
        self.assertEqual(config.walls.p_floor_rel, 1e-3)
        self.assertEqual(config.walls.peak_prominence_rel, 0.0)
        self.assertEqual(config.scaling.taus, (1, 2, 4, 8, 16, 32, 64, 128, 256))
        self.assertEqual(config.scaling.stride, "1")
        self.assertEqual(config.scaling.piecewise_delta, 0.25)

    def test_to_dict_uses_plain_values(self):
        """Test that enums serialise by value and tuples become lists"""
        data = PipelineConfig().to_dict()
        self.assertEqual(data["density"]["method"], "kde")
        self.assertEqual(data["walls"]["strategy"], "potential-peak")
        self.assertEqual(data["density"]["grid"], {"points": 1024, "pad": 3.0})
        self.assertIsInstance(data["scaling"]["taus"], list)

    def test_from_dict_restores_config(self):
        """Test that a config echo rebuilds the same config"""
        config = PipelineConfig(
            density=DensityConfig(method=DensityMethod.HISTOGRAM, grid=GridSpec(512, 2.0),
                                  bandwidth=0.3),
            walls=WallConfig(strategy=WallStrategy.SUPPORT_EDGE, p_floor_rel=0.01),
            scaling=ScalingConfig(taus=(1, 2, 4, 8), stride="tau"),
        )
        self.assertEqual(PipelineConfig.from_dict(config.to_dict()), config)

    def test_partial_override(self):
        """Test that merged() only touches the given keys"""
        config = PipelineConfig().merged({"walls": {"p_floor_rel": 0.05},
                                          "density": {"grid": {"points": 2048}}})
        self.assertEqual(config.walls.p_floor_rel, 0.05)
        self.assertEqual(config.walls.strategy, WallStrategy.POTENTIAL_PEAK)
        self.assertEqual(config.density.grid.points, 2048)
        self.assertEqual(config.density.grid.pad, 3.0)

    def test_override_precedence(self):
        """Test that a later merge wins over an earlier one"""
        from_file = PipelineConfig.from_dict({"walls": {"strategy": "support-edge",
                                                        "p_floor_rel": 0.01}})
        from_flags = from_file.merged({"walls": {"p_floor_rel": 0.02}})
        self.assertEqual(from_flags.walls.strategy, WallStrategy.SUPPORT_EDGE)
        self.assertEqual(from_flags.walls.p_floor_rel, 0.02)

    def test_taus_are_coerced(self):
        """Test that a JSON list of taus becomes a tuple of ints"""
        config = PipelineConfig.from_dict({"scaling": {"taus": [1, 2, 4, 8]}})
        self.assertEqual(config.scaling.taus, (1, 2, 4, 8))

    def test_unknown_keys_rejected(self):
        """Test that unknown sections and keys raise ConfigError"""
        with self.assertRaises(ConfigError):
            PipelineConfig.from_dict({"plotting": {}})
        with self.assertRaises(ConfigError):
            PipelineConfig.from_dict({"walls": {"floor": 0.1}})

    def test_invalid_values_rejected(self):
        """Test range and type validation"""
        invalid = [
            {"walls": {"p_floor_rel": 1.5}},
            {"walls": {"strategy": "middle"}},
            {"density": {"bandwidth": -1.0}},
            {"density": {"grid": {"points": 3}}},
            {"potential": {"mass": 0}},
            {"scaling": {"stride": "2"}},
            {"scaling": {"taus": [1, 1, 2, 4]}},
            {"scaling": {"taus": [0, 1, 2, 4]}},
            {"scaling": {"workers": 0}},
            {"scaling": {"piecewise_delta": "a lot"}},
        ]
        for overrides in invalid:
            with self.subTest(overrides=overrides):
                with self.assertRaises(ConfigError):
                    PipelineConfig.from_dict(overrides)

    def test_non_dict_rejected(self):
        """Test that a non-object config raises ConfigError"""
        with self.assertRaises(ConfigError):
            PipelineConfig().merged([1, 2])
        with self.assertRaises(ConfigError):
            PipelineConfig().merged({"walls": 3})

    def test_stride_for(self):
        """Test per-scale stride selection"""
        self.assertEqual(ScalingConfig(stride="1").stride_for(16), 1)
        self.assertEqual(ScalingConfig(stride="tau").stride_for(16), 16)


class TestErrors(unittest.TestCase):
    """Tests for the error hierarchy"""

    def test_errors_are_value_errors(self):
        """Test that domain errors can be caught as ValueError"""
        with self.assertRaises(ValueError):
            raise DataIOError("missing")

    def test_kinds(self):
        """Test machine-readable kinds"""
        self.assertEqual(DataIOError("x").kind, "io")
        self.assertEqual(InsufficientScalesError("x").kind, "insufficient_scales")
        self.assertEqual(InsufficientTailResolutionError("x").kind,
                         "insufficient_tail_resolution")
        self.assertEqual(ConfigError("x").kind, "config")
        self.assertEqual(InvalidPriceError("x").kind, "invalid_price")

    def test_to_dict(self):
        """Test the error object layout"""
        error = InsufficientTailResolutionError("too few points", stage="walls", tau=16)
        self.assertEqual(error.to_dict(), {
            "kind": "insufficient_tail_resolution",
            "message": "too few points",
            "stage": "walls",
            "tau": 16,
        })

    def test_with_context_keeps_existing(self):
        """Test that context is filled in but never overwritten"""
        error = BohmianWallsError("boom", stage="density")
        error.with_context(stage="scaling", tau=8)
        self.assertEqual(error.stage, "density")
        self.assertEqual(error.tau, 8)

    def test_str_includes_context(self):
        """Test string form"""
        self.assertEqual(str(BohmianWallsError("boom")), "boom")
        self.assertEqual(str(BohmianWallsError("boom", stage="walls", tau=4)),
                         "boom (stage=walls, tau=4)")


if __name__ == '__main__':
    unittest.main()
