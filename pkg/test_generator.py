#!/usr/bin/env python3
"""
Tests for the modular generator: the kernel F_m, the explicit difference
delta^(m) - delta^(0), its identities and the symbol b(x, k).
"""

import sys
import os

import mpmath
import numpy as np
import pytest

# Add project to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from data.synthetic_fields import (
    SyntheticFieldGenerator, make_rng, random_points_in_double_cone, random_unit_vectors,
)
from models.flow import FlowParams, FmKernel
from models.grids import BallGrid, ConeGrid
from models.spacetime import SpacetimePoint
from physics.boundary import restrict_to_V
from physics.errors import DomainError
from physics.generator import (
    Z_apply_callable, attained_exponent, boundary_term_residual, commutator_kernel, conformal_commutation_residual,
    delta_diff, delta_m, fm_batch, fm_bessel, fm_eval, null_covector, symbol_b, symbol_decay_fit, symbol_derivative,
    u_star_gradient,
)
from physics.geometry import u_star
from physics.goursat import default_goursat_spec
from physics.modular import s_tau

GRID = ConeGrid(n_u=96, n_theta=4, n_phi=8)
POINT = SpacetimePoint(t=1.1, x=(0.1, -0.05, 0.08))
# band-limited to |k| <= 6 so that third flow derivatives stay small
LOW_MOMENTUM = BallGrid(radius=6.0, n_radial=24, n_theta=8, n_phi=16)
FLOW_DISC = BallGrid(radius=1.0, n_radial=32, n_theta=12, n_phi=24)
FLOW_CONE = ConeGrid(n_u=64, n_theta=16, n_phi=32)


def test_fm_series_matches_bessel_forms():
    rng = make_rng(3)
    for m, z in zip(rng.uniform(0.5, 2.0, 20), rng.uniform(-4.0, 4.0, 20)):
        series, closed = fm_eval(m, z), fm_bessel(m, z)
        assert series[0] == pytest.approx(closed[0], rel=1e-10)
        assert series[1] == pytest.approx(closed[1], rel=1e-10)

    value, derivative = fm_eval(2.0, 0.0)
    assert value == pytest.approx(4.0 / (8.0 * np.pi))
    assert derivative == pytest.approx(16.0 / (64.0 * np.pi))
    assert fm_bessel(0.0, 1.0) == (0.0, 0.0)

    # arbitrary-precision reference for the timelike branch
    m, z = 1.3, -2.5
    root = mpmath.sqrt(-z)
    reference = m / (4 * mpmath.pi) * mpmath.besselj(1, m * root) / root
    assert fm_eval(m, z)[0] == pytest.approx(float(reference), rel=1e-12)
    print("✅ F_m series matches the Bessel closed forms")


def test_fm_kernel_truncation():
    values, _ = fm_batch(1.0, np.array([-1.0, 0.5]), FmKernel(mass=1.0, truncation_terms=3))
    full, _ = fm_batch(1.0, np.array([-1.0, 0.5]))
    assert np.allclose(values, full, rtol=1e-3)
    assert not np.allclose(values, full, rtol=1e-14, atol=0.0)
    with pytest.raises(ValueError):
        FmKernel(mass=0.0)
    print("✅ F_m truncation parameters work")


def test_commutator_kernel_vanishes_for_massless():
    u = np.linspace(0.0, 0.5, 5)
    assert np.all(commutator_kernel(0.0, 1.0, u, -0.3 * np.ones(5)) == 0.0)
    assert np.all(commutator_kernel(1.0, 1.0, np.zeros(3), np.ones(3)) == 0.0)
    print("✅ Commutator kernel works")


def test_boundary_term_vanishes():
    rng = make_rng(4)
    points = random_points_in_double_cone(rng, 200, margin=0.01)
    directions = random_unit_vectors(rng, 200)
    assert max(boundary_term_residual(p, w) for p, w in zip(points, directions)) <= 1e-10
    print("✅ Boundary term vanishes")


def test_u_star_gradient_matches_differences():
    omega = np.array([0.0, 0.6, 0.8])
    dt, dx = u_star_gradient(POINT, omega)
    step = 1e-6
    shifted = lambda t, x: u_star(SpacetimePoint(t=t, x=x), omega)
    x = POINT.x_array
    assert dt == pytest.approx((shifted(POINT.t + step, x) - shifted(POINT.t - step, x)) / (2 * step), abs=1e-7)
    for i, e in enumerate(np.eye(3)):
        fd = (shifted(POINT.t, x + step * e) - shifted(POINT.t, x - step * e)) / (2 * step)
        assert dx[i] == pytest.approx(fd, abs=1e-7)
    print("✅ Analytic gradient of u* works")


def test_conformal_commutation():
    rng = make_rng(5)
    points = random_points_in_double_cone(rng, 40, margin=0.02)
    worst = max(conformal_commutation_residual(1.0, p, q) for p, q in zip(points[:20], points[20:]))
    assert worst <= 1e-8
    print("✅ Conformal commutation identity holds")


def test_delta_diff_properties():
    generator = SyntheticFieldGenerator()
    phi1 = generator.named_profile("TILTED_COSINE", GRID)
    phi2 = generator.named_profile("ISOTROPIC_SLOW", GRID)
    assert delta_diff(phi1, 0.0, POINT) == 0.0
    combined = phi1.scaled(2.0) + phi2.scaled(-0.5)
    expected = 2.0 * delta_diff(phi1, 1.0, POINT) - 0.5 * delta_diff(phi2, 1.0, POINT)
    assert delta_diff(combined, 1.0, POINT) == pytest.approx(expected, rel=1e-10, abs=1e-14)
    with pytest.raises(DomainError):
        delta_diff(phi1, 1.0, SpacetimePoint(t=0.1, x=(0.5, 0.0, 0.0)))
    print("✅ delta_diff is linear and vanishes for m = 0")


def test_generator_matches_flow_derivative():
    """gamma^X + delta_diff against central differences of s_tau, with one Richardson step."""
    solution = SyntheticFieldGenerator().solution("OFFSET_X", 1.0, LOW_MOMENTUM, FLOW_DISC)
    spec = default_goursat_spec(1.0, FLOW_CONE)
    phi = restrict_to_V(solution, FLOW_CONE)
    points = [SpacetimePoint(t=1.0, x=(0.1, 0.05, -0.1)), SpacetimePoint(t=0.8, x=(0.0, 0.15, 0.1))]
    exact = np.array([delta_m(solution, 1.0, p, spec) for p in points])
    scale = np.max(np.abs(exact))

    def central(step):
        forward = s_tau(phi, FlowParams(tau=step, mass=1.0), points, spec)
        backward = s_tau(phi, FlowParams(tau=-step, mass=1.0), points, spec)
        return (forward - backward) / (2.0 * step)

    coarse, fine = central(0.1), central(0.05)
    error_coarse = np.max(np.abs(coarse - exact)) / scale
    error_fine = np.max(np.abs(fine - exact)) / scale
    error_richardson = np.max(np.abs((4.0 * fine - coarse) / 3.0 - exact)) / scale
    assert error_fine < error_coarse
    assert error_richardson < 2e-3
    print(f"✅ delta_m matches the flow derivative (relative error {error_richardson:.2e})")


def test_z_operator_on_homogeneous_functions():
    def cubic(t, x):
        return t * t * x[0] - x[1] ** 3

    # Z = 1 + (degree of homogeneity)
    expected = 4.0 * cubic(POINT.t, POINT.x_array)
    assert Z_apply_callable(cubic, POINT) == pytest.approx(expected, rel=1e-8)
    print("✅ Z operator works")


def test_symbol_basics():
    at_zero = symbol_b(POINT, np.zeros(4), 1.0)
    assert at_zero.real != 0.0
    assert at_zero.imag == 0.0
    assert symbol_b(POINT, (0.0, 3.0, 0.0, 0.0), 0.0) == 0j
    # the amplitude of b is invariant under k -> -k up to conjugation
    k = np.array([0.0, 2.0, -1.0, 0.5])
    assert symbol_b(POINT, -k, 1.0) == pytest.approx(np.conj(symbol_b(POINT, k, 1.0)), rel=1e-12)
    assert isinstance(symbol_derivative(POINT, k, 1.0, ((1,), (2,))), complex)
    with pytest.raises(DomainError):
        symbol_decay_fit(POINT, 1.0, [(0.0, 1.0, 0.0, 0.0)], (1.0, 8.0))
    print("✅ Symbol basics work")


def test_symbol_decay_exponent():
    directions = [null_covector((1.0, 0.0, 0.0)), null_covector((0.0, 0.0, 1.0)),
                  null_covector((1.0, 1.0, 0.0), future=False)]
    fit = symbol_decay_fit(POINT, 1.0, directions, (4.0, 64.0), n_k=5)
    assert fit.expected == -1.0 and fit.class_exponent == -1.0
    assert fit.slope == pytest.approx(-1.0, abs=0.15)
    assert len(fit.magnitudes) == 5
    print(f"✅ Symbol decays like |k|^-1 along null covectors (slope {fit.slope:.3f})")


def test_symbol_decays_faster_along_spatial_covectors():
    directions = [(0.0, 1.0, 0.0, 0.0), (0.0, 0.0, 0.0, 1.0), (0.0, 1.0, 1.0, 0.0)]
    fit = symbol_decay_fit(POINT, 1.0, directions, (4.0, 64.0), n_k=5)
    assert fit.slope == pytest.approx(-2.0, abs=0.2)
    print(f"✅ Symbol decays like |k|^-2 along spatial covectors (slope {fit.slope:.3f})")


def test_symbol_derivative_exponents():
    directions = [null_covector((1.0, 0.0, 0.0)), null_covector((0.0, 1.0, 1.0))]
    x_fit = symbol_decay_fit(POINT, 1.0, directions, (4.0, 64.0), ((1,), ()), n_k=5)
    k_fit = symbol_decay_fit(POINT, 1.0, directions, (4.0, 64.0), ((), (1,)), n_k=5)
    assert x_fit.expected == 0.0 and x_fit.class_exponent == 0.0
    assert x_fit.slope == pytest.approx(0.0, abs=0.2)
    # k-derivatives pick up -i x b from the prefactor, so they gain no decay here
    assert k_fit.expected == -1.0 and k_fit.class_exponent == -2.0
    assert k_fit.slope == pytest.approx(-1.0, abs=0.2)
    print(f"✅ Symbol derivative exponents (x: {x_fit.slope:.3f}, k: {k_fit.slope:.3f})")


def test_null_covectors():
    k = null_covector((3.0, 0.0, 4.0))
    assert np.allclose(k, [5.0, 3.0, 0.0, 4.0])
    assert null_covector((0.0, 2.0, 0.0), future=False)[0] == -2.0
    assert attained_exponent(2, 1) == 1.0
    with pytest.raises(DomainError):
        null_covector((0.0, 0.0, 0.0))
    print("✅ Null covectors work")


def main():
    """Run all generator tests."""
    print("🧪 Running generator tests\n")
    test_fm_series_matches_bessel_forms()
    test_fm_kernel_truncation()
    test_commutator_kernel_vanishes_for_massless()
    test_boundary_term_vanishes()
    test_u_star_gradient_matches_differences()
    test_conformal_commutation()
    test_delta_diff_properties()
    test_generator_matches_flow_derivative()
    test_z_operator_on_homogeneous_functions()
    test_symbol_basics()
    test_symbol_decay_exponent()
    test_symbol_decays_faster_along_spatial_covectors()
    test_symbol_derivative_exponents()
    test_null_covectors()
    print("\n🎉 All generator tests passed!")


if __name__ == "__main__":
    main()
