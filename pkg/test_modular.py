#!/usr/bin/env python3
"""
Tests for the modular flow on boundary data, its h-space unitary, the massless
geometric flow in the bulk and the KMS structure of lambda.
"""

import sys
import os

import numpy as np
import pytest

# Add project to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from data.synthetic_fields import SyntheticFieldGenerator
from models.flow import FlowParams
from models.grids import BallGrid, ConeGrid
from models.spacetime import SpacetimePoint
from physics.boundary import ell_resample, restrict_to_V, sigma_boundary, weyl_expectation_lambda
from physics.errors import DomainError, MassMismatchError
from physics.geometry import in_double_cone
from physics.goursat import default_goursat_spec
from physics.modular import (
    BETA, beta_flow_boundary, beta_generator, flow_point, kms_boundary_comparison, kms_reality_check,
    modular_unitary_hspace, s_tau, s_tau_massless_bulk, strip_scan, thermal_norm, two_point_flowed,
)

GRID = ConeGrid(n_u=96, n_theta=4, n_phi=8)
LOW_MOMENTUM = BallGrid(radius=6.0, n_radial=24, n_theta=8, n_phi=16)
FLOW_DISC = BallGrid(radius=1.0, n_radial=32, n_theta=12, n_phi=24)
FLOW_CONE = ConeGrid(n_u=64, n_theta=16, n_phi=32)


def _profiles():
    generator = SyntheticFieldGenerator()
    return generator.named_profile("TILTED_COSINE", GRID), generator.named_profile("ISOTROPIC_SLOW", GRID)


def test_flow_params_conventions():
    params = FlowParams.from_modular(0.25, mass=1.0)
    assert params.tau == pytest.approx(-0.5 * np.pi)
    assert params.mass == 1.0
    with pytest.raises(ValueError):
        FlowParams(tau=0.1, mass=-1.0)
    print("✅ Flow parameter conventions work")


def test_beta_flow_group_and_support():
    phi, _ = _profiles()
    assert beta_flow_boundary(phi, 0.0) is phi
    composed = beta_flow_boundary(beta_flow_boundary(phi, 0.4), -0.7)
    direct = beta_flow_boundary(phi, -0.3)
    assert np.max(np.abs(composed.values - direct.values)) <= 1e-8 * np.max(np.abs(phi.values))
    # positive tau pushes support towards the tip of the cone
    assert beta_flow_boundary(phi, 1.0).support_cap < phi.support_cap
    assert beta_flow_boundary(phi, -1.0).support_cap > phi.support_cap
    print("✅ Boundary flow group law works")


def test_beta_flow_preserves_symplectic_form_and_lambda():
    phi1, phi2 = _profiles()
    sigma = sigma_boundary(phi1, phi2)
    expectation = weyl_expectation_lambda(phi1)
    for tau in (-1.0, -0.5, 0.5, 1.0):
        flowed1, flowed2 = beta_flow_boundary(phi1, tau), beta_flow_boundary(phi2, tau)
        assert sigma_boundary(flowed1, flowed2) == pytest.approx(sigma, abs=1e-6)
        assert weyl_expectation_lambda(flowed1) == pytest.approx(expectation, abs=1e-5)
    print("✅ Boundary flow preserves sigma and lambda")


def test_beta_generator_is_flow_derivative():
    phi, _ = _profiles()
    step = 1e-3
    difference = (beta_flow_boundary(phi, step).values - beta_flow_boundary(phi, -step).values) / (2.0 * step)
    generator = beta_generator(phi).values
    assert np.max(np.abs(difference - generator)) <= 1e-4 * np.max(np.abs(generator))
    print("✅ Boundary generator works")


def test_hspace_intertwining():
    """ell_resample(beta_{-tau} Phi) = e^{i tau h} ell_resample(Phi)."""
    phi, _ = _profiles()
    spec = ell_resample(phi)
    norm = np.sqrt(thermal_norm(spec))
    for tau in (-1.0, 0.5):
        flowed = ell_resample(beta_flow_boundary(phi, -tau))
        rotated = modular_unitary_hspace(spec, tau)
        difference = rotated.with_values(flowed.values - rotated.values)
        assert np.sqrt(max(thermal_norm(difference), 0.0)) / norm < 1e-6
        assert thermal_norm(rotated) == pytest.approx(norm ** 2, rel=1e-12)
    print("✅ h-space intertwining works")


def test_kms_reality_and_control():
    phi, _ = _profiles()
    spec = ell_resample(phi)
    assert kms_reality_check(spec) < 1e-8
    # a constant phase theta turns the mismatch into 2i sin(theta) Phi~(h)
    upper = spec.h >= 0.0
    expected = 2.0 * np.sin(0.3) * np.max(np.exp(-np.pi * spec.h[upper]) * np.abs(spec.values[:, upper]))
    control = kms_reality_check(spec.with_values(spec.values * np.exp(0.3j)))
    assert control == pytest.approx(expected, rel=1e-6)
    assert control > 1e-3
    print("✅ KMS reality condition works")


def test_goursat_flow_matches_geometric_massless_flow():
    """s_tau through the boundary equals J^{-1/4} phi along the flow for m = 0."""
    solution = SyntheticFieldGenerator().solution("CENTERED_WIDE", 0.0, LOW_MOMENTUM, FLOW_DISC)
    spec = default_goursat_spec(0.0, FLOW_CONE)
    phi = restrict_to_V(solution, FLOW_CONE)
    points = [SpacetimePoint(t=1.0, x=(0.1, 0.05, -0.1)), SpacetimePoint(t=0.7, x=(0.0, 0.1, 0.15))]
    scale = max(abs(s_tau_massless_bulk(solution, 0.0, p)) for p in points)
    for tau in (-0.5, 0.5):
        boundary_route = s_tau(phi, FlowParams(tau=tau), points, spec)
        geometric = np.array([s_tau_massless_bulk(solution, tau, p) for p in points])
        assert np.max(np.abs(boundary_route - geometric)) < 1e-3 * scale
    with pytest.raises(MassMismatchError):
        s_tau_massless_bulk(SyntheticFieldGenerator().solution("CENTERED_WIDE", 1.0, LOW_MOMENTUM, FLOW_DISC),
                            0.5, points[0])
    print("✅ Goursat flow matches the geometric massless flow")


def test_kms_strip():
    phi1, phi2 = _profiles()
    spec1, spec2 = ell_resample(phi1), ell_resample(phi2)
    largest, bound = strip_scan(spec1, spec2, np.linspace(-2.0, 2.0, 5))
    assert largest <= bound * (1.0 + 1e-9)

    comparison = kms_boundary_comparison(phi1, phi2, list(np.linspace(-3.0, 3.0, 7)))
    assert comparison.matching_convention == "reversed"
    assert comparison.reversed_residual < 1e-4

    with pytest.raises(DomainError):
        two_point_flowed(phi1, phi2, 0.5 + 1j * (BETA + 0.1))
    print("✅ KMS strip boundedness and boundary relation work")


def test_flow_point_stays_in_double_cone():
    p = SpacetimePoint(t=1.1, x=(0.2, -0.1, 0.05))
    for tau in (-2.0, -0.5, 0.5, 2.0):
        endpoint, log_jacobian = flow_point(p, tau)
        assert in_double_cone(endpoint)
        back, log_back = flow_point(endpoint, -tau)
        assert abs(back.t - p.t) < 1e-8
        assert np.allclose(back.x_array, p.x_array, atol=1e-8)
        assert log_jacobian + log_back == pytest.approx(0.0, abs=1e-8)
    assert flow_point(p, 0.0) == (p, 0.0)
    print("✅ Bulk flow of points works")


def main():
    """Run all modular tests."""
    print("🧪 Running modular tests\n")
    test_flow_params_conventions()
    test_beta_flow_group_and_support()
    test_beta_flow_preserves_symplectic_form_and_lambda()
    test_beta_generator_is_flow_derivative()
    test_hspace_intertwining()
    test_kms_reality_and_control()
    test_goursat_flow_matches_geometric_massless_flow()
    test_kms_strip()
    test_flow_point_stays_in_double_cone()
    print("\n🎉 All modular tests passed!")


if __name__ == "__main__":
    main()
