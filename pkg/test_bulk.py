#!/usr/bin/env python3
"""
Tests for Klein-Gordon solutions on the double cone: mode amplitudes, the vacuum
one-particle structure, the bulk symplectic form and the regularized propagator.
"""

import sys
import os
from functools import lru_cache

import numpy as np
import pytest

# Add project to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from data.synthetic_fields import SyntheticFieldGenerator
from models.grids import BallGrid, ConeGrid
from models.spacetime import SpacetimePoint
from physics.boundary import mu_lambda_kspace, restrict_to_V
from physics.bulk import (
    evaluate_dt, evaluate_solution, evaluate_X_derivative, make_bump_cauchy, modes_from_cauchy,
    mu_vacuum, one_particle_product, propagator_batch, propagator_complex, sigma_bulk, solution_dt,
    solution_from_cauchy, solution_values,
)
from physics.errors import DomainError, MassMismatchError, UnregularizedError
from physics.geometry import flow_u, killing_X
from physics.numerics import ball_quadrature

MOMENTUM = BallGrid(radius=14.0, n_radial=40, n_theta=10, n_phi=20)
DISC = BallGrid(radius=1.0, n_radial=48, n_theta=16, n_phi=32)
FLUX = BallGrid(radius=1.0, n_radial=32, n_theta=12, n_phi=24)
ROUNDTRIP_MOMENTUM = BallGrid(radius=30.0, n_radial=56, n_theta=20, n_phi=40)
ROUNDTRIP_DISC = BallGrid(radius=1.0, n_radial=32, n_theta=20, n_phi=40)
CONE = ConeGrid(n_u=64, n_theta=16, n_phi=32)


@lru_cache(maxsize=None)
def _solutions(mass: float):
    generator = SyntheticFieldGenerator()
    return (
        generator.solution("CENTERED_WIDE", mass, MOMENTUM, DISC),
        generator.solution("OFFSET_X", mass, MOMENTUM, DISC),
    )


def test_bump_cauchy_data():
    data = make_bump_cauchy((0.1, 0.0, 0.0), 0.5, 1.0, -2.0, grid=FLUX)
    points, _ = ball_quadrature(FLUX)
    outside = np.linalg.norm(points - np.array([0.1, 0.0, 0.0]), axis=1) >= 0.5
    assert np.all(data.f[outside] == 0.0)
    assert np.allclose(data.g, -2.0 * data.f)
    assert data.support_radius == pytest.approx(0.6)

    with pytest.raises(DomainError):
        make_bump_cauchy((0.5, 0.0, 0.0), 0.6, 1.0, 0.0, grid=FLUX)
    with pytest.raises(DomainError):
        modes_from_cauchy(data, -1.0, MOMENTUM)
    print("✅ Bump Cauchy data work")


def test_solution_reproduces_cauchy_data():
    """phi(1, x) = f and d_t phi(1, x) = g in sup norm on the whole disc."""
    # shape 18 leaves an edge jump of 1/I0(18) ~ 2e-7 and a spectrum that dies out below k_max
    data = make_bump_cauchy((0.0, 0.0, 0.0), 0.85, 1.0, 0.5, grid=ROUNDTRIP_DISC, profile="kaiser", shape=18.0)
    solution = solution_from_cauchy(data, 1.0, ROUNDTRIP_MOMENTUM)
    points, _ = ball_quadrature(ROUNDTRIP_DISC)
    sample = slice(None, None, 7)
    t = np.ones(points[sample].shape[0])
    error_f = np.max(np.abs(solution_values(solution, t, points[sample]) - data.f[sample])) / np.max(np.abs(data.f))
    error_g = np.max(np.abs(solution_dt(solution, t, points[sample]) - data.g[sample])) / np.max(np.abs(data.g))
    assert error_f < 1e-4
    assert error_g < 1e-4
    print(f"✅ Solution reproduces Cauchy data (sup errors f {error_f:.2e}, g {error_g:.2e})")


def test_time_derivative_matches_finite_difference():
    solution, _ = _solutions(1.0)
    h = 1e-4
    for p in (SpacetimePoint(t=1.0, x=(0.2, 0.0, 0.1)), SpacetimePoint(t=0.7, x=(-0.1, 0.25, 0.0))):
        later = SpacetimePoint(t=p.t + h, x=p.x)
        earlier = SpacetimePoint(t=p.t - h, x=p.x)
        fd = (evaluate_solution(solution, later) - evaluate_solution(solution, earlier)) / (2.0 * h)
        exact = evaluate_dt(solution, p)
        assert abs(fd - exact) < 1e-5 * max(1.0, abs(exact))
    print("✅ d_t phi matches central differences")


def test_X_derivative_matches_flow():
    """X(phi) is the derivative along X in the bulk and along flow_u on V."""
    solution, _ = _solutions(1.0)
    h = 1e-4
    p = SpacetimePoint(t=0.9, x=(0.1, -0.2, 0.15))
    vector = killing_X(p).vector_array
    ahead = SpacetimePoint(t=p.t + h * vector[0], x=p.x_array + h * vector[1:])
    behind = SpacetimePoint(t=p.t - h * vector[0], x=p.x_array - h * vector[1:])
    fd = (evaluate_solution(solution, ahead) - evaluate_solution(solution, behind)) / (2.0 * h)
    exact = evaluate_X_derivative(solution, p)
    assert abs(fd - exact) < 1e-5 * max(1.0, abs(exact))

    omega = np.array([0.6, 0.0, 0.8])
    for u in (0.25, 0.6):
        forward = evaluate_solution(solution, SpacetimePoint.on_cone(flow_u(h, u), omega))
        backward = evaluate_solution(solution, SpacetimePoint.on_cone(flow_u(-h, u), omega))
        exact = evaluate_X_derivative(solution, SpacetimePoint.on_cone(u, omega))
        assert abs((forward - backward) / (2.0 * h) - exact) < 1e-5 * max(1.0, abs(exact))
    print("✅ X-derivative matches the flow")


def test_one_particle_structure():
    """-2 Im <a1, a2> is the symplectic form and Re <a, a> is positive."""
    for mass in (0.0, 1.0):
        s1, s2 = _solutions(mass)
        product = one_particle_product(s1, s2)
        sigma = sigma_bulk(s1, s2, FLUX)
        assert -2.0 * product.imag == pytest.approx(sigma, rel=1e-2, abs=1e-6)
        assert one_particle_product(s1, s1).real > 0.0
        assert abs(one_particle_product(s1, s1).imag) < 1e-12 * one_particle_product(s1, s1).real
    print("✅ Vacuum one-particle structure works")


def test_vacuum_form_matches_boundary_state():
    """mu_vacuum equals mu_lambda of the restrictions, entry by entry."""
    for mass in (0.0, 1.0):
        s1, s2 = _solutions(mass)
        phi1, phi2 = restrict_to_V(s1, CONE), restrict_to_V(s2, CONE)
        for a, b, pa, pb in ((s1, s1, phi1, phi1), (s1, s2, phi1, phi2), (s2, s2, phi2, phi2)):
            vacuum = mu_vacuum(a, b)
            assert abs(mu_lambda_kspace(pa, pb) - vacuum) <= 1e-3 * abs(vacuum)
    print("✅ Vacuum form matches the boundary state")


def test_symplectic_form_is_antisymmetric_and_bilinear():
    s1, s2 = _solutions(0.5)
    assert sigma_bulk(s1, s2, FLUX) == pytest.approx(-sigma_bulk(s2, s1, FLUX), rel=1e-12)
    assert abs(sigma_bulk(s1, s1, FLUX)) < 1e-12
    combined = s1.scaled(2.0) + s2
    assert sigma_bulk(combined, s2, FLUX) == pytest.approx(2.0 * sigma_bulk(s1, s2, FLUX), rel=1e-10)

    other_mass, _ = _solutions(1.0)
    with pytest.raises(MassMismatchError):
        sigma_bulk(s1, other_mass, FLUX)
    print("✅ Bulk symplectic form works")


def test_propagator():
    q = SpacetimePoint(t=0.3, x=(0.1, 0.0, 0.0))
    with pytest.raises(UnregularizedError):
        propagator_complex(1.0, 1.0 + 0.0j, np.zeros(3), q)

    # spacelike separation: the two regularizations agree in the limit
    spacelike = propagator_complex(1.0, 0.3 - 1e-8j, np.array([0.8, 0.0, 0.0]), q)
    assert abs(spacelike) < 1e-6

    # small mass approaches the massless propagator
    q_t = np.array([0.2, 0.4])
    q_x = np.array([[0.1, 0.0, 0.0], [0.0, 0.2, 0.0]])
    massless = propagator_batch(0.0, 1.0 - 0.05j, np.zeros(3), q_t, q_x)
    light = propagator_batch(1e-4, 1.0 - 0.05j, np.zeros(3), q_t, q_x)
    assert np.allclose(light, massless, rtol=1e-6)
    print("✅ Regularized propagator works")


def main():
    """Run all bulk tests."""
    print("🧪 Running bulk tests\n")
    test_bump_cauchy_data()
    test_solution_reproduces_cauchy_data()
    test_time_derivative_matches_finite_difference()
    test_X_derivative_matches_flow()
    test_one_particle_structure()
    test_vacuum_form_matches_boundary_state()
    test_symplectic_form_is_antisymmetric_and_bilinear()
    test_propagator()
    print("\n🎉 All bulk tests passed!")


if __name__ == "__main__":
    main()
