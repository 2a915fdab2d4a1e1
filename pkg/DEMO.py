#!/usr/bin/env python3
"""
DEMO.py - Quick demonstration of BohmianWalls

Run this script to see the library in action!
"""

import sys

# Add current directory to path for demo
sys.path.insert(0, '.')


def run_oracle_demo():
    """Quantum potential and walls of closed-form densities"""
    import numpy as np
    from scipy import stats

    from bohmian_walls import (
        WallStrategy,
        amplitude,
        analytic_gaussian_potential,
        density_from_pdf,
        detect_walls,
        gaussian_density,
        quantum_potential,
    )

    print("📐 Closed-form densities")
    print("=" * 50)

    q = np.linspace(-6.0, 6.0, 2001)
    dens = gaussian_density(0.0, 1.0, q)
    pot = quantum_potential(amplitude(dens))
    exact = analytic_gaussian_potential(0.0, 1.0, q)
    error = np.max(np.abs(pot.U[pot.valid] - exact.U[pot.valid]))
    print(f"✅ Standard normal: U(0) = {np.interp(0.0, q[pot.valid], pot.U[pot.valid]):.5f} "
          f"(exact -0.25), max error {error:.2e}")

    edge = detect_walls(pot, dens, WallStrategy.SUPPORT_EDGE)
    print(f"   Support-edge walls: {edge.q_minus:.4f} .. {edge.q_plus:.4f}")

    t_dens = density_from_pdf(q, stats.t.pdf(q, df=3, scale=1.0 / np.sqrt(3.0)))
    t_pot = quantum_potential(amplitude(t_dens))
    peak = detect_walls(t_pot, t_dens, WallStrategy.POTENTIAL_PEAK)
    print(f"✅ Student-t(3), unit variance: potential-peak walls "
          f"{peak.q_minus:.4f} .. {peak.q_plus:.4f} (exact +-{np.sqrt(5.0 / 3.0):.4f})")
    print()


def run_scaling_demo():
    """Width curve of synthetic prices and its power-law fit"""
    from bohmian_walls import (
        PipelineConfig,
        SynthKind,
        SynthSpec,
        WallConfig,
        WallStrategy,
        compute_width_curve,
        estimate_hurst,
        fit_piecewise,
        fit_scaling,
        generate,
        returns_to_prices,
    )

    print("📈 Width scaling on synthetic prices")
    print("=" * 50)

    config = PipelineConfig(walls=WallConfig(strategy=WallStrategy.SUPPORT_EDGE, p_floor_rel=0.05))
    taus = (1, 2, 4, 8, 16, 32, 64)

    for kind, hurst in ((SynthKind.WHITE, 0.5), (SynthKind.FGN, 0.7)):
        returns = generate(SynthSpec(kind, 1 << 17, 0.001, hurst=hurst, seed=7))
        prices = returns_to_prices(returns)

        curve = compute_width_curve(prices, taus, config)
        fit = fit_scaling(curve)
        print(f"✅ {kind.value} (H = {hurst}): slope {fit.slope:.3f}, R^2 {fit.r_squared:.4f}, "
              f"Hurst estimate {estimate_hurst(returns):.3f}")
        for tau, width in curve.points:
            print(f"   tau={tau:<3d} width={width:.5f}")

        split = fit_piecewise(curve)
        verdict = "preferred" if split.preferred else "not preferred"
        print(f"   Two-segment fit: breakpoint tau={split.breakpoint_tau} "
              f"({split.slope_pre:.3f} -> {split.slope_post:.3f}, {verdict})")
    print()


def run_comparison_demo():
    """Fat-tailed returns against variance-matched white noise"""
    import numpy as np

    from bohmian_walls import (
        DensityConfig,
        PipelineConfig,
        SynthKind,
        SynthSpec,
        WallConfig,
        compare_with_white_noise,
        generate,
    )

    print("⚖️  Student-t against matched white noise")
    print("=" * 50)

    market = generate(SynthSpec(SynthKind.STUDENT_T, 200_000, 1.0, df=3.0, seed=3))
    config = PipelineConfig(density=DensityConfig(bandwidth=0.25),
                            walls=WallConfig(p_floor_rel=0.05))
    comparison = compare_with_white_noise(market, seed=4, config=config)

    for name, result in (("market", comparison.market), ("baseline", comparison.baseline)):
        mode = np.argmax(result.density.p)
        print(f"✅ {name:<8s} walls {result.walls.q_minus:+.3f} .. {result.walls.q_plus:+.3f}, "
              f"peak density {result.density.p[mode]:.3f}")
    print(f"   RMS potential difference {comparison.rms_difference:.4f} "
          f"over {int(comparison.shared.sum())} shared points")
    print()


if __name__ == "__main__":
    print("🚀 Starting BohmianWalls demonstration...\n")

    try:
        run_oracle_demo()
        run_scaling_demo()
        run_comparison_demo()
        print("🎉 Demo completed successfully!")
    except ImportError as e:
        print(f"❌ Import error: {e}")
        print("Make sure numpy, scipy and pandas are installed (pip install -e .)")
        sys.exit(1)
