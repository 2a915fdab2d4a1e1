"""
Unit tests for the bohm_potential module
"""

import unittest
import math
import sys
import os

import numpy as np
from scipy import stats

# Add library path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from bohmian_walls.core import GridError, PotentialConfig
from bohmian_walls.density import Amplitude, amplitude, density_from_pdf, gaussian_density
from bohmian_walls.bohm_potential import (
    analytic_gaussian_potential,
    potential_from_config,
    quantum_potential,
    second_difference,
)


def gaussian_potential(mu, sigma, points, half_width=6.0, **kwargs):
    q = np.linspace(mu - half_width * sigma, mu + half_width * sigma, points)
    return quantum_potential(amplitude(gaussian_density(mu, sigma, q)), **kwargs)


def max_oracle_error(pot, mu, sigma, span=4.0):
    exact = analytic_gaussian_potential(mu, sigma, pot.q)
    region = pot.valid & (np.abs(pot.q - mu) <= span * sigma)
    return float(np.max(np.abs(pot.U[region] - exact.U[region]))), exact, region


class TestQuantumPotential(unittest.TestCase):
    """Tests for quantum_potential on exact amplitudes"""

    def test_gaussian_oracle(self):
        """Test agreement with the closed form for several sigmas"""
        for sigma in (0.5, 1.0, 2.0):
            with self.subTest(sigma=sigma):
                pot = gaussian_potential(0.0, sigma, 4096)
                error, exact, region = max_oracle_error(pot, 0.0, sigma)
                scale = np.max(np.abs(exact.U[region]))
                self.assertLessEqual(error, 1e-4 * scale)

    def test_standard_normal_values(self):
        """Test U(0) = -1/4 and U(2) = 1/4 for the standard normal"""
        pot = gaussian_potential(0.0, 1.0, 4096)
        q, U = pot.q[pot.valid], pot.U[pot.valid]
        self.assertAlmostEqual(float(np.interp(0.0, q, U)), -0.25, delta=1e-4)
        self.assertAlmostEqual(float(np.interp(2.0, q, U)), 0.25, delta=1e-4)

    def test_second_order_convergence(self):
        """Test that halving the grid step cuts the error by about four"""
        coarse = gaussian_potential(0.0, 1.0, 1025)
        fine = gaussian_potential(0.0, 1.0, 2049)
        ratio = max_oracle_error(coarse, 0.0, 1.0)[0] / max_oracle_error(fine, 0.0, 1.0)[0]
        self.assertGreaterEqual(ratio, 3.0)
        self.assertLessEqual(ratio, 5.0)

    def test_zero_crossings(self):
        """Test sign changes of U at q = +-sqrt(2)"""
        pot = gaussian_potential(0.0, 1.0, 4096)
        h = pot.q[1] - pot.q[0]
        inner = pot.valid & (np.abs(pot.q) < 5.0)
        q, U = pot.q[inner], pot.U[inner]
        interior = q[1:][np.diff(np.sign(U)) != 0]
        self.assertEqual(interior.size, 2)
        np.testing.assert_allclose(np.sort(np.abs(interior)), math.sqrt(2.0), atol=2 * h)

    def test_translation(self):
        """Test that moving the mean shifts the curve"""
        base = gaussian_potential(0.0, 1.0, 2049)
        shifted = gaussian_potential(3.0, 1.0, 2049)
        np.testing.assert_allclose(shifted.q, base.q + 3.0, atol=1e-12)
        np.testing.assert_allclose(shifted.U[base.valid], base.U[base.valid], rtol=1e-6, atol=1e-8)

    def test_scale_covariance(self):
        """Test U_c(q) = U(q/c) / c^2"""
        base = gaussian_potential(0.0, 1.0, 2049)
        for c in (0.01, 3.0):
            scaled = gaussian_potential(0.0, c, 2049)
            np.testing.assert_allclose(scaled.q, c * base.q, rtol=1e-12, atol=1e-15)
            np.testing.assert_allclose(c * c * scaled.U[base.valid], base.U[base.valid],
                                       rtol=1e-3, atol=1e-9)

    def test_constant_amplitude_interior(self):
        """Test that a flat density gives U = 0 away from its edges"""
        q = np.linspace(-1.0, 2.0, 301)
        dens = density_from_pdf(q, ((q >= 0.0) & (q <= 1.0)).astype(float))
        pot = quantum_potential(amplitude(dens))
        interior = (q > 0.05) & (q < 0.95)
        self.assertTrue(np.all(pot.valid[interior]))
        np.testing.assert_allclose(pot.U[interior], 0.0, atol=1e-8)

    def test_masking(self):
        """Test that endpoints and near-zero amplitudes are invalid"""
        q = np.linspace(-1.0, 2.0, 301)
        dens = density_from_pdf(q, ((q >= 0.0) & (q <= 1.0)).astype(float))
        pot = quantum_potential(amplitude(dens))
        self.assertFalse(pot.valid[0])
        self.assertFalse(pot.valid[-1])
        outside = (q < -0.01) | (q > 1.01)
        self.assertFalse(np.any(pot.valid[outside]))
        self.assertTrue(np.all(np.isnan(pot.U[~pot.valid])))
        self.assertEqual(pot.valid_count, int(np.count_nonzero(pot.valid)))

    def test_mode_is_not_the_potential_maximum(self):
        """Test the inverse relation between density and potential"""
        q = np.linspace(-8.0, 8.0, 2001)
        pdfs = {
            "normal": stats.norm.pdf(q),
            "student-t": stats.t.pdf(q, df=3),
            "logistic": stats.logistic.pdf(q, scale=0.8),
        }
        for name, pdf in pdfs.items():
            with self.subTest(density=name):
                dens = density_from_pdf(q, pdf)
                pot = quantum_potential(amplitude(dens))
                mode = int(np.argmax(dens.p))
                top = int(np.nanargmax(np.where(pot.valid, pot.U, -np.inf)))
                self.assertNotEqual(mode, top)
                self.assertLess(pot.U[mode], 0.0)

    def test_units_and_sign(self):
        """Test the hbar^2 / m prefactor and the negate option"""
        base = gaussian_potential(0.0, 1.0, 1025)
        scaled = gaussian_potential(0.0, 1.0, 1025, hbar=2.0, mass=0.5)
        np.testing.assert_allclose(scaled.U[base.valid], 8.0 * base.U[base.valid], rtol=1e-12)
        flipped = gaussian_potential(0.0, 1.0, 1025, negate=True)
        np.testing.assert_allclose(flipped.U[base.valid], -base.U[base.valid], rtol=1e-12)
        np.testing.assert_allclose(base.negated().U[base.valid], flipped.U[base.valid],
                                   rtol=1e-12)

    def test_from_config(self):
        """Test the config wrapper"""
        q = np.linspace(-6.0, 6.0, 513)
        amp = amplitude(gaussian_density(0.0, 1.0, q))
        pot = potential_from_config(amp, PotentialConfig(hbar=1.0, mass=2.0))
        direct = quantum_potential(amp, 1.0, 2.0)
        np.testing.assert_array_equal(pot.valid, direct.valid)
        np.testing.assert_allclose(pot.U[pot.valid], direct.U[direct.valid])

    def test_short_grid(self):
        """Test that fewer than five points are rejected"""
        amp = Amplitude(np.arange(4, dtype=float), np.array([0.1, 0.5, 0.5, 0.1]))
        with self.assertRaises(GridError):
            quantum_potential(amp)


class TestAnalyticGaussianPotential(unittest.TestCase):
    """Tests for analytic_gaussian_potential"""

    def test_values(self):
        """Test the closed form at known points"""
        pot = analytic_gaussian_potential(0.0, 1.0, np.array([-math.sqrt(2.0), 0.0, math.sqrt(2.0)]))
        np.testing.assert_allclose(pot.U, [0.0, -0.25, 0.0], atol=1e-12)
        self.assertTrue(np.all(pot.valid))

    def test_translation_and_scale(self):
        """Test the symmetries of the closed form"""
        q = np.linspace(-5.0, 5.0, 11)
        base = analytic_gaussian_potential(0.0, 1.0, q)
        np.testing.assert_allclose(analytic_gaussian_potential(3.0, 1.0, q + 3.0).U, base.U,
                                   atol=1e-12)
        np.testing.assert_allclose(4.0 * analytic_gaussian_potential(0.0, 2.0, 2.0 * q).U,
                                   base.U, atol=1e-12)

    def test_invalid_sigma(self):
        """Test sigma validation"""
        with self.assertRaises(GridError):
            analytic_gaussian_potential(0.0, 0.0, np.linspace(-1, 1, 5))


class TestSecondDifference(unittest.TestCase):
    """Tests for second_difference"""

    def test_quadratic(self):
        """Test that a parabola has a constant second difference"""
        q = np.linspace(-1.0, 1.0, 21)
        d2 = second_difference(3.0 * q ** 2, q[1] - q[0])
        self.assertTrue(np.isnan(d2[0]) and np.isnan(d2[-1]))
        np.testing.assert_allclose(d2[1:-1], 6.0, rtol=1e-9)


if __name__ == '__main__':
    unittest.main()
