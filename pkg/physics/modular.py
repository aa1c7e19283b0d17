"""
Modular dynamics: the boundary flow beta_tau, its one-particle unitary in h-space,
the bulk flow s_tau obtained through the Goursat problem, the geometric massless flow,
and the KMS structure of the boundary state at inverse temperature 2 pi.
"""

import logging
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp

from config.settings import settings
from models.boundary_data import BoundaryData, HSpectrum
from models.fields import KGSolution
from models.flow import FlowParams, GoursatSpec, KMSComparison
from models.grids import EllGrid
from models.spacetime import SpacetimePoint
from physics.boundary import ell_resample, hspace_product, restrict_to_V
from physics.bulk import evaluate_solution
from physics.errors import DomainError, MassMismatchError
from physics.geometry import flow_u, killing_components, require_in_double_cone
from physics.goursat import default_goursat_spec, goursat_solve
from physics.numerics import cone_quadratures, differentiate_on_nodes, legendre_coefficients, legendre_evaluate

logger = logging.getLogger(__name__)

BETA = 2.0 * np.pi


def beta_flow_boundary(phi: BoundaryData, tau: float) -> BoundaryData:
    """(beta_tau Phi)(w, u) = Phi(w, u / (u + e^{-tau} (1 - u))), resampled on the same u-nodes."""
    if tau == 0.0:
        return phi
    _, quad = cone_quadratures(phi.grid)
    source = flow_u(-tau, quad.nodes)
    values = legendre_evaluate(quad, legendre_coefficients(quad, phi.values), source)
    cap = flow_u(tau, phi.support_cap) if phi.support_cap > 0.0 else 0.0
    return BoundaryData(grid=phi.grid, values=values, support_cap=cap)


def modular_unitary_hspace(spec: HSpectrum, tau: float) -> HSpectrum:
    """V_tau = e^{i tau h}."""
    return spec.with_values(spec.values * np.exp(1j * tau * spec.h))


def s_tau(
    data: Union[BoundaryData, KGSolution],
    params: FlowParams,
    points: Sequence[SpacetimePoint],
    spec: Optional[GoursatSpec] = None,
) -> np.ndarray:
    """Bulk flow (L^-1 beta_tau L) evaluated at points."""
    if isinstance(data, KGSolution):
        if data.mass != params.mass:
            raise MassMismatchError(f"Solution mass differs from flow mass [m={data.mass}, flow={params.mass}]")
        data = restrict_to_V(data, spec.cone_grid if spec else None)
    spec = spec or default_goursat_spec(params.mass, data.grid)
    return goursat_solve(beta_flow_boundary(data, params.tau), spec, points)


def _backward_flow_rhs(_, state):
    x_t, x_space, divergence = killing_components(state[0], state[1:4])
    return np.concatenate([[-x_t], -x_space, [divergence]])


def flow_point(p: SpacetimePoint, tau: float) -> Tuple[SpacetimePoint, float]:
    """Move p along -X for parameter tau; returns the endpoint and ln J accumulated from div X."""
    if tau == 0.0:
        return p, 0.0
    start = np.concatenate([[p.t], p.x_array, [0.0]])
    solution = solve_ivp(
        _backward_flow_rhs,
        (0.0, tau),
        start,
        method="DOP853",
        rtol=settings.FLOW_RTOL,
        atol=settings.FLOW_ATOL,
    )
    if not solution.success:
        raise DomainError(f"Flow integration failed [tau={tau}, message={solution.message}]")
    end = solution.y[:, -1]
    endpoint = SpacetimePoint(t=float(end[0]), x=tuple(float(c) for c in end[1:4]))
    if abs(endpoint.t - 1.0) + endpoint.radius > 1.0 + 1e-9:
        raise DomainError(f"Flow left the closed double cone [tau={tau}, t={endpoint.t}, x={endpoint.x}]")
    return endpoint, float(end[4])


def s_tau_massless_bulk(s: KGSolution, tau: float, p: SpacetimePoint, closure: bool = False) -> float:
    """Geometric flow J^{-1/4} phi(flowed point) of a massless solution; closure=True admits points on V."""
    if s.mass != 0.0:
        raise MassMismatchError(f"The geometric flow acts on massless solutions only [m={s.mass}]")
    if closure:
        if abs(p.t - 1.0) + p.radius > 1.0 + 1e-12:
            raise DomainError(f"Point outside the closed double cone [t={p.t}, x={p.x}]")
    else:
        require_in_double_cone(p)
    endpoint, log_jacobian = flow_point(p, tau)
    return float(np.exp(-0.25 * log_jacobian) * evaluate_solution(s, endpoint))


def kms_reality_check(spec: HSpectrum) -> float:
    """
    sup over the grid of |e^{-pi h} Phi~(w, h) + (j Phi~)(w, h)| = sup e^{-pi h} |Phi~(w, h) - conj(Phi~(w, -h))|.

    The modulus of the mismatch is even in h; the sup runs over h >= 0.
    """
    h = spec.h
    values = spec.values
    if not np.allclose(h[::-1], -h, atol=1e-12 * np.max(np.abs(h))):
        h, values = h[1:], values[:, 1:]
    mismatch = values - np.conj(values[:, ::-1])
    upper = h >= 0.0
    return float(np.max(np.exp(-np.pi * h[upper]) * np.abs(mismatch[:, upper]), initial=0.0))


def _require_strip(tau: complex) -> complex:
    tau = complex(tau)
    if not -1e-12 <= tau.imag <= BETA + 1e-12:
        raise DomainError(f"Flow parameter outside the KMS strip 0 <= Im(tau) <= 2 pi [tau={tau}]")
    return tau


def two_point_flowed_spectra(spec1: HSpectrum, spec2: HSpectrum, tau: complex) -> complex:
    return hspace_product(spec1, spec2, _require_strip(tau))


def two_point_flowed(phi1: BoundaryData, phi2: BoundaryData, tau: complex,
                     ell_grid: Optional[EllGrid] = None) -> complex:
    """F(tau) = int dw dh m(h) conj(Phi1~) e^{i tau h} Phi2~ on the strip 0 <= Im(tau) <= 2 pi."""
    tau = _require_strip(tau)
    return hspace_product(ell_resample(phi1, ell_grid), ell_resample(phi2, ell_grid), tau)


def thermal_norm(spec: HSpectrum, shift: float = 0.0) -> float:
    """int m(h) e^{-shift h} |Phi~|^2."""
    return float(hspace_product(spec, spec, 1j * shift).real)


def kms_boundary_comparison(
    phi1: BoundaryData,
    phi2: BoundaryData,
    taus: Sequence[float],
    tol: float = 1e-4,
    ell_grid: Optional[EllGrid] = None,
) -> KMSComparison:
    """
    Compare F(tau + 2 pi i) with both swapped correlations <K Phi2, V(-+tau) K Phi1>.
    Residuals are relative to the strip bound of |F|.
    """
    spec1, spec2 = ell_resample(phi1, ell_grid), ell_resample(phi2, ell_grid)
    scale = strip_bound(spec1, spec2)
    upper = [hspace_product(spec1, spec2, tau + 1j * BETA) for tau in taus]
    reversed_swap = [hspace_product(spec2, spec1, -tau) for tau in taus]
    forward_swap = [hspace_product(spec2, spec1, tau) for tau in taus]

    def residual(other) -> float:
        worst = max(abs(a - b) for a, b in zip(upper, other))
        return worst / scale if scale > 0.0 else worst

    reversed_residual = residual(reversed_swap)
    forward_residual = residual(forward_swap)
    if reversed_residual <= tol:
        matching = "reversed"
    elif forward_residual <= tol:
        matching = "forward"
    else:
        matching = None
    logger.info(f"KMS boundary comparison [taus={len(taus)}, reversed={reversed_residual:.3e}, "
                f"forward={forward_residual:.3e}, matching={matching}]")
    return KMSComparison(
        taus=tuple(float(tau) for tau in taus),
        upper_boundary=tuple(upper),
        reversed_swap=tuple(reversed_swap),
        forward_swap=tuple(forward_swap),
        reversed_residual=reversed_residual,
        forward_residual=forward_residual,
        matching_convention=matching,
    )


def strip_bound(spec1: HSpectrum, spec2: HSpectrum) -> float:
    """Upper bound of |F| on the closed strip from the norms on its two edges."""
    lower = np.sqrt(thermal_norm(spec1) * thermal_norm(spec2))
    upper = np.sqrt(thermal_norm(spec1, BETA) * thermal_norm(spec2, BETA))
    return float(max(lower, upper))


def strip_scan(spec1: HSpectrum, spec2: HSpectrum, real_parts: Sequence[float], n_imag: int = 9) -> Tuple[float, float]:
    """max |F(tau)| over a grid on the strip and the edge bound it must respect."""
    heights = np.linspace(0.0, BETA, n_imag)
    largest = max(
        abs(two_point_flowed_spectra(spec1, spec2, re + 1j * im)) for re in real_parts for im in heights
    )
    return float(largest), strip_bound(spec1, spec2)


def beta_generator(phi: BoundaryData) -> BoundaryData:
    """d/dtau beta_tau Phi at tau = 0, i.e. u (1 - u) d_u Phi."""
    _, quad = cone_quadratures(phi.grid)
    u = quad.nodes
    values = u * (1.0 - u) * differentiate_on_nodes(quad, phi.values)
    return BoundaryData(grid=phi.grid, values=values, support_cap=phi.support_cap)
