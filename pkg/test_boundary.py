#!/usr/bin/env python3
"""
Tests for boundary data on V and the boundary state lambda in its k-space,
kernel and h-space representations.
"""

import sys
import os

import numpy as np
import pytest

# Add project to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from data.synthetic_fields import SyntheticFieldGenerator, boundary_profile, sochockij_families
from models.boundary_data import BoundaryData
from models.grids import ConeGrid, EpsSchedule
from physics.boundary import (
    boundary_product_hspace, boundary_product_kernel_limit, boundary_product_kspace, detect_support_cap,
    ell_resample, mu_lambda_hspace, mu_lambda_kernel, mu_lambda_kspace, sigma_boundary, sochockij_compare,
    thermal_weight, weyl_product_check,
)
from physics.errors import GridError, ResampleError
from physics.numerics import cone_quadratures

GRID = ConeGrid(n_u=96, n_theta=4, n_phi=8)


def _profiles():
    generator = SyntheticFieldGenerator()
    return generator.named_profile("TILTED_COSINE", GRID), generator.named_profile("ISOTROPIC_SLOW", GRID)


def test_boundary_data_validation():
    with pytest.raises(ValueError):
        BoundaryData(grid=GRID, values=np.zeros((3, 96)), support_cap=0.5)
    with pytest.raises(ValueError):
        BoundaryData(grid=GRID, values=np.zeros(GRID.shape, dtype=complex), support_cap=0.5)
    phi1, phi2 = _profiles()
    with pytest.raises(ValueError):
        phi1 + boundary_profile(ConeGrid(n_u=32, n_theta=4, n_phi=8))
    assert (phi1 + phi2).support_cap == max(phi1.support_cap, phi2.support_cap)
    print("✅ Boundary data validation works")


def test_support_cap_detection():
    phi1, _ = _profiles()
    _, quad = cone_quadratures(GRID)
    cap = detect_support_cap(phi1.values, quad)
    assert 0.6 < cap <= 0.75
    assert detect_support_cap(np.zeros(GRID.shape), quad) == 0.0
    print(f"✅ Support cap detection works (cap={cap:.3f})")


def test_boundary_symplectic_form():
    phi1, phi2 = _profiles()
    assert sigma_boundary(phi1, phi2) == pytest.approx(-sigma_boundary(phi2, phi1), rel=1e-12)
    assert abs(sigma_boundary(phi1, phi1)) < 1e-14
    assert sigma_boundary(phi1.scaled(3.0), phi2) == pytest.approx(3.0 * sigma_boundary(phi1, phi2), rel=1e-12)
    with pytest.raises(GridError):
        sigma_boundary(phi1, boundary_profile(ConeGrid(n_u=32, n_theta=4, n_phi=8)))
    print("✅ Boundary symplectic form works")


def test_imaginary_part_is_symplectic_form():
    """Im of the unrealified product is -sigma_V / 2 in all three representations."""
    phi1, phi2 = _profiles()
    sigma = sigma_boundary(phi1, phi2)
    assert abs(sigma) > 1e-5
    for name, product in [
        ("k-space", boundary_product_kspace(phi1, phi2)),
        ("h-space", boundary_product_hspace(phi1, phi2)),
        ("kernel", boundary_product_kernel_limit(phi1, phi2)),
    ]:
        assert abs(-2.0 * product.imag - sigma) <= 1e-6, f"{name} imaginary part"
    assert -2.0 * boundary_product_kspace(phi2, phi1).imag == pytest.approx(-sigma, abs=1e-6)
    print("✅ Imaginary-part identity works")


def test_three_representations_agree():
    phi1, phi2 = _profiles()
    k_space = mu_lambda_kspace(phi1, phi2)
    h_space = mu_lambda_hspace(phi1, phi2)
    kernel = mu_lambda_kernel(phi1, phi2)
    scale = np.sqrt(mu_lambda_kspace(phi1, phi1) * mu_lambda_kspace(phi2, phi2))
    assert abs(k_space - h_space) / scale < 1e-4
    assert abs(k_space - kernel) / scale < 1e-4
    print(f"✅ Three representations of mu_lambda agree [k={k_space:.6f}, h={h_space:.6f}, kernel={kernel:.6f}]")


def test_kernel_limit_with_short_schedule():
    """Positivity and the zero pair on an explicit schedule."""
    phi1, phi2 = _profiles()
    sched = EpsSchedule.geometric(1e-3, 0.5, 6, order=2)
    full = mu_lambda_kernel(phi1, phi2, sched)
    assert mu_lambda_kernel(phi1, phi1, sched) > 0.0
    assert mu_lambda_kernel(phi1, phi2.scaled(0.0), sched) == 0.0
    assert full == pytest.approx(mu_lambda_kspace(phi1, phi2), rel=1e-3)
    print("✅ Kernel limit works on a custom schedule")


def test_one_particle_cauchy_schwarz():
    """|sigma|^2 <= 4 mu(1,1) mu(2,2)."""
    phi1, phi2 = _profiles()
    sigma = sigma_boundary(phi1, phi2)
    assert sigma ** 2 <= 4.0 * mu_lambda_kspace(phi1, phi1) * mu_lambda_kspace(phi2, phi2)
    print("✅ One-particle Cauchy-Schwarz works")


def test_weyl_product():
    phi1, phi2 = _profiles()
    lhs, rhs = weyl_product_check(phi1.scaled(0.5), phi2.scaled(0.5))
    assert abs(lhs - rhs) < 1e-8
    assert 0.0 < abs(lhs) <= 1.0
    print("✅ Weyl product relation works")


def test_thermal_weight():
    h = np.array([-3.0, -0.5, -1e-9, 0.0, 1e-9, 0.5, 3.0])
    weight = thermal_weight(h)
    assert weight[3] == pytest.approx(1.0 / np.pi)
    assert weight[2] == pytest.approx(1.0 / np.pi, rel=1e-6)
    assert np.all(weight > 0.0)
    # m(h) - m(-h) = 2h and m(h) e^{-2 pi h} = m(-h)
    assert np.allclose(weight - weight[::-1], 2.0 * h, atol=1e-12)
    assert np.allclose(thermal_weight(h, 2.0 * np.pi), weight[::-1], rtol=1e-12)
    assert np.isfinite(thermal_weight(np.array([-400.0, 400.0]), np.pi)).all()
    print("✅ Thermal weight works")


def test_ell_resample_requires_decay():
    _, quad = cone_quadratures(GRID)
    not_decaying = BoundaryData(grid=GRID, values=np.tile(quad.nodes, (GRID.shape[0], 1)), support_cap=0.99)
    with pytest.raises(ResampleError):
        ell_resample(not_decaying)
    phi1, _ = _profiles()
    spec = ell_resample(phi1)
    assert spec.values.shape == (GRID.shape[0], spec.h.size)
    print("✅ l-resampling works")


def test_sochockij_regularizer_independence():
    sched = EpsSchedule.geometric(0.02, 0.5, 6, order=3)
    for profile in sochockij_families():
        with_h, plain = sochockij_compare(profile, sched)
        assert abs(with_h - plain) <= 1e-4 * max(abs(plain), 1.0)
    print("✅ Sochockij regularizer independence works")


def main():
    """Run all boundary tests."""
    print("🧪 Running boundary tests\n")
    test_boundary_data_validation()
    test_support_cap_detection()
    test_boundary_symplectic_form()
    test_imaginary_part_is_symplectic_form()
    test_three_representations_agree()
    test_kernel_limit_with_short_schedule()
    test_one_particle_cauchy_schwarz()
    test_weyl_product()
    test_thermal_weight()
    test_ell_resample_requires_decay()
    test_sochockij_regularizer_independence()
    print("\n🎉 All boundary tests passed!")


if __name__ == "__main__":
    main()
