"""
Modular suite: the boundary flow is a symplectic group action that leaves lambda invariant,
and for m = 0 the Goursat route reproduces the geometric flow of the bulk.
"""

import logging

import numpy as np

from data.synthetic_fields import random_points_in_double_cone
from models.flow import FlowParams
from models.spacetime import SpacetimePoint
from physics.boundary import restrict_to_V, sigma_boundary, weyl_expectation_lambda
from physics.goursat import default_goursat_spec
from physics.modular import beta_flow_boundary, s_tau, s_tau_massless_bulk
from physics.numerics import cone_quadratures
from suites.common import SuiteContext

logger = logging.getLogger(__name__)

SUITE = "modular"


def _symplectic_invariance(ctx: SuiteContext, taus):
    worst = 0.0
    for phi1, phi2 in ctx.generator.random_boundary_pairs(ctx.pairs(20), ctx.profile_grid(), stream=31):
        reference = sigma_boundary(phi1, phi2)
        for tau in taus:
            worst = max(worst, abs(sigma_boundary(beta_flow_boundary(phi1, tau), beta_flow_boundary(phi2, tau))
                                   - reference))
    return worst


def _group_law(ctx: SuiteContext):
    phi = ctx.generator.named_profile("TILTED_COSINE", ctx.profile_grid())
    composed = beta_flow_boundary(beta_flow_boundary(phi, 0.4), -0.7)
    direct = beta_flow_boundary(phi, -0.3)
    return float(np.max(np.abs(composed.values - direct.values)) / np.max(np.abs(phi.values)))


def _lambda_invariance(ctx: SuiteContext, taus):
    worst = 0.0
    caps = []
    for phi, _ in ctx.generator.random_boundary_pairs(ctx.pairs(5), ctx.profile_grid(), stream=32):
        reference = weyl_expectation_lambda(phi)
        for tau in taus:
            flowed = beta_flow_boundary(phi, tau)
            caps.append(flowed.support_cap)
            worst = max(worst, abs(weyl_expectation_lambda(flowed) - reference))
    return worst, f"max support_cap={max(caps):.4f}"


def _geometric_flow(ctx: SuiteContext, taus):
    """Goursat route of s_tau against the geometric massless flow at interior probes."""
    solution = ctx.solution(ctx.generator.cauchy_data("CENTERED_WIDE", ctx.cauchy_grid()), 0.0)
    grid = ctx.cone_grid()
    phi = restrict_to_V(solution, grid)
    spec = default_goursat_spec(0.0, grid, ctx.schedule(grid))
    probes = random_points_in_double_cone(ctx.rng(33), 8, margin=0.15)
    scale = max(abs(s_tau_massless_bulk(solution, 0.0, p)) for p in probes)
    worst = 0.0
    rows = []
    for tau in taus:
        boundary_route = s_tau(phi, FlowParams(tau=tau, mass=0.0), probes, spec)
        geometric = np.array([s_tau_massless_bulk(solution, tau, p) for p in probes])
        discrepancy = float(np.max(np.abs(boundary_route - geometric)) / scale)
        rows.append([tau, discrepancy])
        worst = max(worst, discrepancy)
    ctx.add_table("massless_flow_comparison", ["tau", "relative_discrepancy"], rows)
    return worst


def _restriction_intertwining(ctx: SuiteContext, taus):
    """u (s_tau phi)|_V against beta_tau of the restriction, on a few rays."""
    solution = ctx.solution(ctx.generator.cauchy_data("OFFSET_X", ctx.cauchy_grid()), 0.0)
    grid = ctx.cone_grid()
    phi = restrict_to_V(solution, grid)
    sphere, quad = cone_quadratures(grid)
    rays = range(0, sphere.size, max(1, sphere.size // 4))
    scale = np.max(np.abs(phi.values))
    worst = 0.0
    for tau in taus:
        flowed = beta_flow_boundary(phi, tau)
        for d in rays:
            omega = sphere.directions[d]
            for j in range(0, quad.size, 4):
                u = quad.nodes[j]
                bulk = u * s_tau_massless_bulk(solution, tau, SpacetimePoint.on_cone(u, omega), closure=True)
                worst = max(worst, abs(bulk - flowed.values[d, j]) / scale)
    return worst


def run(ctx: SuiteContext) -> None:
    taus = ctx.geometric_taus()
    logger.info(f"Running suite [suite={SUITE}] [taus={taus}]")
    invariance_taus = sorted(set(taus) | {0.25})[:5]
    ctx.record(SUITE, "beta_symplectic_invariance", lambda: _symplectic_invariance(ctx, invariance_taus), 1e-6)
    ctx.record(SUITE, "beta_group_law", lambda: _group_law(ctx), 1e-8)
    ctx.record(SUITE, "lambda_invariance", lambda: _lambda_invariance(ctx, taus), 1e-5)
    if 0.0 in ctx.config.masses:
        ctx.record(SUITE, "massless_geometric_flow", lambda: _geometric_flow(ctx, taus), 2e-3)
        ctx.record(SUITE, "restriction_intertwining", lambda: _restriction_intertwining(ctx, taus), 1e-4)
