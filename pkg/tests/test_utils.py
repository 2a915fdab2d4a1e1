"""
Unit tests for the utils module
"""

import unittest
import math
import tempfile
import sys
import os
from pathlib import Path

import numpy as np

# Add library path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from bohmian_walls.core import GridError, InsufficientScalesError
from bohmian_walls.utils import FileUtils, FitUtils, GridUtils, ValidationUtils


class TestGridUtils(unittest.TestCase):
    """Tests for GridUtils class"""

    def test_uniform_grid(self):
        """Test grid construction"""
        q = GridUtils.uniform_grid(-1.0, 1.0, 5)
        np.testing.assert_allclose(q, [-1.0, -0.5, 0.0, 0.5, 1.0])

        with self.assertRaises(GridError):
            GridUtils.uniform_grid(1.0, -1.0, 5)
        with self.assertRaises(GridError):
            GridUtils.uniform_grid(0.0, 1.0, 1)

    def test_spacing(self):
        """Test spacing and the uniformity check"""
        self.assertAlmostEqual(GridUtils.spacing(np.linspace(0, 1, 11)), 0.1)

        with self.assertRaises(GridError):
            GridUtils.spacing(np.array([0.0, 0.1, 0.3]))
        with self.assertRaises(GridError):
            GridUtils.spacing(np.array([0.0, -0.1, -0.2]))
        with self.assertRaises(GridError):
            GridUtils.spacing(np.array([0.0]))

    def test_integrate_and_normalize(self):
        """Test trapezoid integration and normalization"""
        q = np.linspace(0.0, 2.0, 101)
        self.assertAlmostEqual(GridUtils.integrate(q, np.ones_like(q)), 2.0)
        p = GridUtils.normalize(q, 3.0 * np.ones_like(q))
        self.assertAlmostEqual(GridUtils.integrate(q, p), 1.0)

        with self.assertRaises(GridError):
            GridUtils.normalize(q, np.zeros_like(q))


class TestValidationUtils(unittest.TestCase):
    """Tests for ValidationUtils class"""

    def test_is_power_of_two(self):
        """Test power-of-two detection"""
        for n in (1, 2, 4, 1024, 1 << 20):
            self.assertTrue(ValidationUtils.is_power_of_two(n))
        for n in (0, 3, 6, 1000, -4):
            self.assertFalse(ValidationUtils.is_power_of_two(n))

    def test_all_finite(self):
        """Test finiteness check"""
        self.assertTrue(ValidationUtils.all_finite(np.array([1.0, 2.0])))
        self.assertFalse(ValidationUtils.all_finite(np.array([1.0, np.nan])))
        self.assertFalse(ValidationUtils.all_finite(np.array([np.inf])))

    def test_sample_sigma(self):
        """Test sample standard deviation with ddof=1"""
        self.assertAlmostEqual(ValidationUtils.sample_sigma(np.array([1.0, 3.0])), math.sqrt(2.0))
        self.assertEqual(ValidationUtils.sample_sigma(np.array([5.0])), 0.0)
        self.assertEqual(ValidationUtils.sample_sigma(np.array([2.0, 2.0, 2.0])), 0.0)

    def test_is_degenerate(self):
        """Test round-off tolerant detection of constant samples"""
        for value in (0.0, 0.01, 1.0 / 3.0, 1e6):
            self.assertTrue(ValidationUtils.is_degenerate(np.full(50, value)))
        self.assertTrue(ValidationUtils.is_degenerate(np.array([1.0])))
        self.assertFalse(ValidationUtils.is_degenerate(np.array([0.01, 0.0100001])))
        self.assertFalse(ValidationUtils.is_degenerate(np.array([1e-9, -1e-9])))


class TestFitUtils(unittest.TestCase):
    """Tests for FitUtils class"""

    def test_exact_line(self):
        """Test OLS on exact linear data"""
        x = np.arange(6, dtype=float)
        fit = FitUtils.ols(x, 1.5 - 0.25 * x)
        self.assertAlmostEqual(fit.slope, -0.25, places=10)
        self.assertAlmostEqual(fit.intercept, 1.5, places=10)
        self.assertAlmostEqual(fit.r_squared, 1.0, places=10)
        self.assertLess(fit.sse, 1e-24)

    def test_loglog(self):
        """Test the log-log fit of a power law"""
        x = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
        fit = FitUtils.ols_loglog(x, 3.0 * x ** 0.7)
        self.assertAlmostEqual(fit.slope, 0.7, places=10)
        self.assertAlmostEqual(fit.intercept, math.log(3.0), places=10)

    def test_degenerate_x(self):
        """Test that repeated x values cannot be fitted"""
        with self.assertRaises(InsufficientScalesError):
            FitUtils.ols([2.0, 2.0, 2.0], [1.0, 2.0, 3.0])
        with self.assertRaises(InsufficientScalesError):
            FitUtils.ols([1.0], [1.0])


class TestFileUtils(unittest.TestCase):
    """Tests for FileUtils class"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_sha256(self):
        """Test file checksum"""
        path = self.root / "abc.txt"
        path.write_bytes(b"abc")
        self.assertEqual(FileUtils.sha256(path),
                         "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad")

    def test_atomic_write_text(self):
        """Test atomic write into a new directory"""
        target = self.root / "nested" / "out.csv"
        written = FileUtils.atomic_write_text(target, "a,b\n1,2\n")
        self.assertEqual(written, target)
        self.assertEqual(target.read_text(encoding="utf-8"), "a,b\n1,2\n")
        # no temporary siblings left behind
        self.assertEqual([p.name for p in target.parent.iterdir()], ["out.csv"])

        FileUtils.atomic_write_text(target, "replaced\n")
        self.assertEqual(target.read_text(encoding="utf-8"), "replaced\n")


if __name__ == '__main__':
    unittest.main()
