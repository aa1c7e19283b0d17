"""
Characteristic data on the null cone V and the boundary quasifree state lambda.

The one-particle form mu_lambda has three equivalent representations, all computed here:
  * kernel:  Re lim -(1/pi) int dw du du' Phi1(w,u) Phi2(w,u') / (u - u' - i eps)^2
  * k-space: Re int dw dk 2k conj(Phi1^(w,k)) Phi2^(w,k),  k > 0
  * h-space: Re int dw dh m(h) conj(Phi1~(w,h)) Phi2~(w,h),  u = 1/(1 + e^-l)
with m(h) = 2h / (1 - e^{-2 pi h}). The imaginary part of the k-space product is -sigma_V / 2.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import special

from config.settings import settings
from models.boundary_data import BoundaryData, BoundarySpectrum, HSpectrum
from models.fields import KGSolution
from models.flow import SochockijProfile
from models.grids import ConeGrid, EllGrid, EpsSchedule, Quadrature1D
from physics.bulk import solution_values
from physics.errors import ExtrapolationError, GridError, ResampleError
from physics.numerics import (
    SQRT_2PI, clustered_rule, cone_quadratures, default_schedule, differentiate_on_nodes, eps_extrapolate,
    fourier_interval, gauss_legendre, legendre_coefficients, legendre_derivative, legendre_evaluate,
    legendre_vandermonde,
)

logger = logging.getLogger(__name__)


def default_cone_grid() -> ConeGrid:
    n_theta, n_phi = settings.parse_sphere(settings.CONE_SPHERE)
    return ConeGrid(n_u=settings.CONE_U_NODES, n_theta=n_theta, n_phi=n_phi)


def default_ell_grid() -> EllGrid:
    return EllGrid(half_width=settings.ELL_HALF_WIDTH, n=settings.ELL_POINTS)


def detect_support_cap(values: np.ndarray, quad: Quadrature1D, rel_tol: float = 1e-8) -> float:
    """Smallest u-node beyond which |Phi| stays below rel_tol * max |Phi|."""
    profile = np.max(np.abs(values), axis=0)
    peak = profile.max() if profile.size else 0.0
    if peak == 0.0:
        return 0.0
    significant = np.nonzero(profile > rel_tol * peak)[0]
    last = int(significant[-1])
    if last + 1 < quad.size:
        return float(quad.nodes[last + 1])
    logger.warning(f"Boundary data do not vanish near u=1 [edge_ratio={profile[-1] / peak:.3e}]")
    return float(0.5 * (quad.nodes[-1] + 1.0))


def _require_same_grid(phi1: BoundaryData, phi2: BoundaryData) -> None:
    if phi1.grid != phi2.grid:
        raise GridError(f"Boundary data live on different grids [{phi1.grid}, {phi2.grid}]")


def restrict_to_V(s: KGSolution, grid: Optional[ConeGrid] = None) -> BoundaryData:
    """Phi(w, u) = u * phi(u, u w)."""
    grid = grid or default_cone_grid()
    sphere, quad = cone_quadratures(grid)
    u = quad.nodes
    t = np.tile(u, sphere.size)
    x = (sphere.directions[:, None, :] * u[None, :, None]).reshape(-1, 3)
    values = (solution_values(s, t, x) * t).reshape(grid.shape)
    cap = detect_support_cap(values, quad)
    logger.debug(f"Restricted solution to V [mass={s.mass}, points={t.size}, support_cap={cap:.3f}]")
    return BoundaryData(grid=grid, values=values, support_cap=cap)


def boundary_derivative(phi: BoundaryData) -> np.ndarray:
    """d_u Phi at the grid nodes by spectral differentiation."""
    _, quad = cone_quadratures(phi.grid)
    return differentiate_on_nodes(quad, phi.values)


def sigma_boundary(phi1: BoundaryData, phi2: BoundaryData) -> float:
    """sigma_V = int dw int du (Phi2 d_u Phi1 - Phi1 d_u Phi2)."""
    _require_same_grid(phi1, phi2)
    sphere, quad = cone_quadratures(phi1.grid)
    integrand = phi2.values * boundary_derivative(phi1) - phi1.values * boundary_derivative(phi2)
    return float(sphere.weights @ quad.integrate(integrand))


def k_transform(phi: BoundaryData, k_max: Optional[float] = None, n_k: Optional[int] = None) -> BoundarySpectrum:
    """Phi^(w, k) = (2 pi)^(-1/2) int_0^1 e^{iku} Phi(w, u) du on Gauss nodes of [0, k_max]."""
    k_max = k_max or settings.KSPACE_K_MAX
    k_rule = gauss_legendre(n_k or settings.KSPACE_NODES, 0.0, k_max)
    _, quad = cone_quadratures(phi.grid)
    coeffs = legendre_coefficients(quad, phi.values)

    # upsample so the rule resolves e^{iku} up to k_max
    fine = gauss_legendre(max(2 * quad.size, quad.size + int(np.ceil(k_max))), 0.0, 1.0)
    fine_values = coeffs @ legendre_vandermonde(quad, fine.nodes).T
    kernel = np.exp(1j * np.outer(fine.nodes, k_rule.nodes)) * fine.weights[:, None]
    values = (fine_values @ kernel) / SQRT_2PI

    coeffs_by_order = [coeffs]
    for _ in range(3):
        coeffs_by_order.append(legendre_derivative(quad, coeffs_by_order[-1]))
    edge = np.stack([legendre_evaluate(quad, c, np.zeros(1))[..., 0] for c in coeffs_by_order[1:]], axis=-1)
    return BoundarySpectrum(grid=phi.grid, k_rule=k_rule, values=values, edge_derivatives=edge)


def spectrum_product(spec1: BoundarySpectrum, spec2: BoundarySpectrum) -> complex:
    """
    int dw int_0^inf 2k conj(Phi1^) Phi2^ dk with the analytic tail beyond k_max.

    Since Phi(w, 0) = 0, Phi^ ~ (2 pi)^-1/2 (-s/k^2 - i p/k^3 + q/k^4) with (s, p, q) the
    tip derivatives; the tail keeps the k^-3, k^-4 and k^-5 terms of the integrand.
    """
    sphere, _ = cone_quadratures(spec1.grid)
    k = spec1.k_rule.nodes
    k_max = spec1.k_rule.b
    body = (np.conj(spec1.values) * spec2.values) @ (2.0 * k * spec1.k_rule.weights)
    s1, p1, q1 = np.moveaxis(spec1.edge_derivatives, -1, 0)
    s2, p2, q2 = np.moveaxis(spec2.edge_derivatives, -1, 0)
    tail = (
        s1 * s2 / (2.0 * np.pi * k_max ** 2)
        + 1j * (s1 * p2 - p1 * s2) / (3.0 * np.pi * k_max ** 3)
        + (p1 * p2 - s1 * q2 - q1 * s2) / (4.0 * np.pi * k_max ** 4)
    )
    return complex(sphere.weights @ (body + tail))


def boundary_product_kspace(phi1: BoundaryData, phi2: BoundaryData) -> complex:
    """Unrealified k-space product <K Phi1, K Phi2> = mu_lambda - (i/2) sigma_V."""
    _require_same_grid(phi1, phi2)
    return spectrum_product(k_transform(phi1), k_transform(phi2))


def mu_lambda_kspace(phi1: BoundaryData, phi2: BoundaryData) -> float:
    return boundary_product_kspace(phi1, phi2).real


def boundary_product_kernel(phi1: BoundaryData, phi2: BoundaryData, eps: float) -> complex:
    """-(1/pi) int dw du du' Phi1(w,u) Phi2(w,u') / (u - u' - i eps)^2 at fixed eps."""
    _require_same_grid(phi1, phi2)
    sphere, quad = cone_quadratures(phi1.grid)
    nodes, weights = clustered_rule(
        quad.nodes,
        eps,
        0.0,
        1.0,
        settings.CLUSTER_WINDOW,
        settings.CLUSTER_WINDOW_NODES,
        settings.CLUSTER_SIDE_NODES,
    )
    n_outer, n_inner = nodes.shape
    coeffs = legendre_coefficients(quad, phi2.values)
    inner_values = (legendre_vandermonde(quad, nodes).reshape(-1, quad.size) @ coeffs.T)
    inner_values = inner_values.reshape(n_outer, n_inner, -1)
    kernel = weights / (quad.nodes[:, None] - nodes - 1j * eps) ** 2
    inner = np.einsum('im,imd->di', kernel, inner_values)
    outer = quad.integrate(phi1.values * inner)
    return complex(-(sphere.weights @ outer) / np.pi)


def _checked_limit(samples, order: int, log_terms: bool, what: str) -> complex:
    result = eps_extrapolate(samples, order=order, log_terms=log_terms)
    scale = max(abs(value) for _, value in samples)
    if result.error_estimate > settings.EXTRAPOLATION_REL_TOL * max(scale, 1e-300):
        raise ExtrapolationError(
            f"Unstable eps-extrapolation of {what} [limit={result.limit:.6e}, error={result.error_estimate:.3e}]"
        )
    return result.limit


def boundary_product_kernel_limit(phi1: BoundaryData, phi2: BoundaryData,
                                  sched: Optional[EpsSchedule] = None) -> complex:
    """eps -> 0+ limit of the kernel product; the eps-expansion carries an eps^2 log(eps) term from the tip of V."""
    sched = sched or default_schedule(phi1.grid.spacing)
    samples = [(eps, boundary_product_kernel(phi1, phi2, eps)) for eps in sched.eps_values]
    return _checked_limit(samples, sched.extrapolation_order, True, "kernel product")


def mu_lambda_kernel(phi1: BoundaryData, phi2: BoundaryData, sched: Optional[EpsSchedule] = None) -> float:
    return boundary_product_kernel_limit(phi1, phi2, sched).real


def thermal_weight(h, shift: float = 0.0) -> np.ndarray:
    """m(h) e^{-shift h} with m(h) = 2h / (1 - e^{-2 pi h}), evaluated without overflow for 0 <= shift <= 2 pi."""
    h = np.asarray(h, dtype=float)
    out = np.empty_like(h)
    positive = h > 0.0
    negative = h < 0.0
    hp = h[positive]
    hn = h[negative]
    out[positive] = 2.0 * hp * np.exp(-shift * hp) / -np.expm1(-2.0 * np.pi * hp)
    out[negative] = 2.0 * hn * np.exp((2.0 * np.pi - shift) * hn) / np.expm1(2.0 * np.pi * hn)
    out[~(positive | negative)] = 1.0 / np.pi
    return out


def ell_resample(phi: BoundaryData, ell_grid: Optional[EllGrid] = None, tol: Optional[float] = None) -> HSpectrum:
    """Resample Phi on a uniform l-grid (u = 1/(1+e^-l)) and transform in l."""
    ell_grid = ell_grid or default_ell_grid()
    tol = settings.ELL_TRUNCATION_TOL if tol is None else tol
    _, quad = cone_quadratures(phi.grid)
    ell = ell_grid.points()
    coeffs = legendre_coefficients(quad, phi.values)
    samples = coeffs @ legendre_vandermonde(quad, special.expit(ell)).T
    peak = np.max(np.abs(samples))
    if peak > 0.0:
        edge = max(np.max(np.abs(samples[:, 0])), np.max(np.abs(samples[:, -1]))) / peak
        if edge > tol:
            raise ResampleError(
                f"Boundary data not negligible at the l-window edge [edge_ratio={edge:.3e}, tol={tol:.1e}]"
            )
    spectrum = fourier_interval(ell, samples)
    return HSpectrum(grid=phi.grid, h=spectrum.k, values=spectrum.values)


def hspace_product(spec1: HSpectrum, spec2: HSpectrum, tau: complex = 0.0) -> complex:
    """int dw dh m(h) conj(Phi1~) e^{i tau h} Phi2~, for 0 <= Im(tau) <= 2 pi."""
    if spec1.grid != spec2.grid or spec1.h.shape != spec2.h.shape:
        raise GridError("h-spectra live on different grids")
    tau = complex(tau)
    sphere, _ = cone_quadratures(spec1.grid)
    weight = thermal_weight(spec1.h, shift=tau.imag) * np.exp(1j * tau.real * spec1.h) * spec1.dh
    per_direction = (np.conj(spec1.values) * spec2.values) @ weight
    return complex(sphere.weights @ per_direction)


def boundary_product_hspace(phi1: BoundaryData, phi2: BoundaryData, ell_grid: Optional[EllGrid] = None) -> complex:
    """Unrealified h-space product; equals the k-space one, so its imaginary part is -sigma_V / 2."""
    _require_same_grid(phi1, phi2)
    return hspace_product(ell_resample(phi1, ell_grid), ell_resample(phi2, ell_grid))


def mu_lambda_hspace(phi1: BoundaryData, phi2: BoundaryData, ell_grid: Optional[EllGrid] = None) -> float:
    return boundary_product_hspace(phi1, phi2, ell_grid).real


def weyl_expectation_lambda(phi: BoundaryData) -> float:
    """lambda(W(Phi)) = exp(-mu_lambda(Phi, Phi) / 2)."""
    return float(np.exp(-0.5 * mu_lambda_kspace(phi, phi)))


def weyl_product_check(phi1: BoundaryData, phi2: BoundaryData) -> Tuple[complex, complex]:
    """
    Both sides of lambda(W(Phi1) W(Phi2)) = e^{i sigma/2} lambda(W(Phi1 + Phi2)):
    (a) from the bilinear expansion of the one-particle product, (b) directly on Phi1 + Phi2.
    """
    _require_same_grid(phi1, phi2)
    spec1, spec2 = k_transform(phi1), k_transform(phi2)
    mu11 = spectrum_product(spec1, spec1).real
    mu22 = spectrum_product(spec2, spec2).real
    mu12 = spectrum_product(spec1, spec2).real
    sigma12 = sigma_boundary(phi1, phi2)
    lhs = np.exp(-0.5 * (mu11 + mu22) - mu12 + 0.5j * sigma12)
    total = phi1 + phi2
    rhs = np.exp(0.5j * sigma12) * weyl_expectation_lambda(total)
    return complex(lhs), complex(rhs)


def _sochockij_integral(profile: SochockijProfile, eps: float, use_h: bool) -> complex:
    a, b = profile.interval
    step = 1e-6
    slope = abs(profile.f(profile.root + step) - profile.f(profile.root - step)) / (2.0 * step)
    regularizer = abs(profile.h(profile.root)) if use_h else 1.0
    nodes, weights = clustered_rule(profile.root, eps * regularizer / slope, a, b, 0.5, 96, 96)
    reg = profile.h(nodes) if use_h else 1.0
    return complex(np.sum(weights * profile.g(nodes) / (profile.f(nodes) + 1j * eps * reg) ** 2))


def sochockij_compare(profile: SochockijProfile, sched: EpsSchedule) -> Tuple[complex, complex]:
    """eps -> 0+ limits of int g/(f + i eps h)^2 and int g/(f + i eps)^2."""
    with_h = [(eps, _sochockij_integral(profile, eps, True)) for eps in sched.eps_values]
    plain = [(eps, _sochockij_integral(profile, eps, False)) for eps in sched.eps_values]
    order = sched.extrapolation_order
    return (
        _checked_limit(with_h, order, False, f"{profile.name} with regularizer"),
        _checked_limit(plain, order, False, f"{profile.name} plain"),
    )
