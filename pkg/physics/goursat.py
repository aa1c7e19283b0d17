"""
Reconstruction of a Klein-Gordon solution in D from its characteristic data on V.

    phi(t, x) = lim_{eps -> 0+} -2 int dw int_0^1 du Delta_m((t - i eps, x), (u, u w)) u d_u Phi(w, u)

For fixed eps the integrand is smooth; on each ray it has a near-singularity at the complex
root u0 of sigma, which is linear in u. The u-integral uses a rule clustered around Re u0.
"""

import logging
from typing import Callable, List, Optional, Sequence

import numpy as np

from config.settings import settings
from models.boundary_data import BoundaryData
from models.fields import KGSolution
from models.flow import GoursatSpec
from models.grids import ConeGrid, EpsSchedule
from models.spacetime import SpacetimePoint
from physics.bulk import propagator_batch, solution_values
from physics.boundary import default_cone_grid, restrict_to_V
from physics.errors import ExtrapolationError, GridError
from physics.geometry import require_in_double_cone
from physics.numerics import (
    clustered_rule, cone_quadratures, default_schedule, eps_extrapolate, legendre_coefficients,
    legendre_derivative, legendre_evaluate, parallel_map,
)

logger = logging.getLogger(__name__)


def default_goursat_spec(
    mass: float,
    cone_grid: Optional[ConeGrid] = None,
    sched: Optional[EpsSchedule] = None,
) -> GoursatSpec:
    cone_grid = cone_grid or default_cone_grid()
    return GoursatSpec(
        mass=mass,
        sched=sched or default_schedule(cone_grid.spacing),
        cone_grid=cone_grid,
        window=settings.CLUSTER_WINDOW,
        n_window=settings.CLUSTER_WINDOW_NODES,
        n_side=settings.CLUSTER_SIDE_NODES,
    )


def _regularized_value(phi: BoundaryData, slope_coeffs: np.ndarray, spec: GoursatSpec,
                       p: SpacetimePoint, eps: float) -> complex:
    sphere, quad = cone_quadratures(spec.cone_grid)
    x = p.x_array
    tc = p.t - 1j * eps
    pole = (tc * tc - x @ x) / (2.0 * (tc - sphere.directions @ x))
    nodes, weights = clustered_rule(
        pole.real, np.abs(pole.imag), 0.0, 1.0, spec.window, spec.n_window, spec.n_side
    )
    slopes = legendre_evaluate(quad, slope_coeffs, nodes)
    q_x = (sphere.directions[:, None, :] * nodes[..., None]).reshape(-1, 3)
    kernel = propagator_batch(spec.mass, tc, x, nodes.ravel(), q_x).reshape(nodes.shape)
    per_direction = np.sum(weights * kernel * nodes * slopes, axis=-1)
    return complex(-2.0 * (sphere.weights @ per_direction))


def goursat_solve(phi: BoundaryData, spec: GoursatSpec, points: Sequence[SpacetimePoint]) -> np.ndarray:
    """Values at the points of the solution whose restriction to V is phi."""
    if phi.grid != spec.cone_grid:
        raise GridError(f"Boundary data grid does not match the Goursat grid [{phi.grid}, {spec.cone_grid}]")
    points = list(points)
    for p in points:
        require_in_double_cone(p)

    _, quad = cone_quadratures(spec.cone_grid)
    slope_coeffs = legendre_derivative(quad, legendre_coefficients(quad, phi.values))

    def solve_point(p: SpacetimePoint):
        samples = [(eps, _regularized_value(phi, slope_coeffs, spec, p, eps)) for eps in spec.sched.eps_values]
        return eps_extrapolate(samples, order=spec.sched.extrapolation_order)

    results = parallel_map(solve_point, points)
    values = np.array([result.limit.real for result in results])
    scale = max(np.max(np.abs(values), initial=0.0), np.max(np.abs(phi.values), initial=0.0))
    for p, result in zip(points, results):
        if result.error_estimate > settings.GOURSAT_REL_TOL * scale:
            raise ExtrapolationError(
                f"Unstable Goursat limit [t={p.t}, x={p.x}, error={result.error_estimate:.3e}, scale={scale:.3e}]"
            )
        if abs(result.limit.imag) > settings.GOURSAT_REL_TOL * scale:
            raise ExtrapolationError(
                f"Goursat limit has an imaginary residue [t={p.t}, x={p.x}, imag={result.limit.imag:.3e}]"
            )
    logger.debug(f"Goursat reconstruction done [mass={spec.mass}, points={len(points)}, scale={scale:.3e}]")
    return values


def roundtrip_residual(s: KGSolution, spec: GoursatSpec, probe_points: Sequence[SpacetimePoint]) -> float:
    """sup |goursat_solve(restrict_to_V(s)) - phi| / sup |phi| over the probes."""
    probe_points = list(probe_points)
    phi = restrict_to_V(s, spec.cone_grid)
    reconstructed = goursat_solve(phi, spec, probe_points)
    t = np.array([p.t for p in probe_points])
    x = np.array([p.x for p in probe_points])
    exact = solution_values(s, t, x)
    scale = np.max(np.abs(exact), initial=0.0)
    residual = float(np.max(np.abs(reconstructed - exact), initial=0.0))
    logger.info(f"Goursat roundtrip [mass={spec.mass}, probes={len(probe_points)}, "
                f"residual={residual:.3e}, scale={scale:.3e}]")
    return residual / scale if scale > 0.0 else residual


def refinement_residuals(
    s: KGSolution,
    mass: float,
    grids: Sequence[ConeGrid],
    probe_points: Sequence[SpacetimePoint],
    schedule: Optional[Callable[[ConeGrid], EpsSchedule]] = None,
) -> List[float]:
    """Roundtrip residuals on successively refined cone grids; schedule maps a grid to its eps values."""
    return [
        roundtrip_residual(s, default_goursat_spec(mass, grid, schedule(grid) if schedule else None), probe_points)
        for grid in grids
    ]
