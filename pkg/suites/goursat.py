"""
Goursat suite: reconstruction from characteristic data reproduces the bulk solution,
converges under refinement of the u-grid and is linear in the data.
"""

import logging

import numpy as np

from data.synthetic_fields import random_points_in_double_cone
from physics.boundary import restrict_to_V
from physics.goursat import default_goursat_spec, goursat_solve, refinement_residuals, roundtrip_residual
from physics.numerics import loglog_slope
from suites.common import SuiteContext

logger = logging.getLogger(__name__)

SUITE = "goursat"

REFINEMENT_U_NODES = (16, 24, 32, 48)


def run(ctx: SuiteContext) -> None:
    logger.info(f"Running suite [suite={SUITE}] [masses={ctx.config.masses}]")
    probes = random_points_in_double_cone(ctx.rng(21), 25, margin=0.1)
    cauchy = ctx.generator.cauchy_data("OFFSET_X", ctx.cauchy_grid())
    rows = []

    for mass in ctx.config.masses:
        solution = ctx.solution(cauchy, mass)
        grid = ctx.cone_grid()
        spec = default_goursat_spec(mass, grid, ctx.schedule(grid))
        ctx.record(SUITE, f"roundtrip[m={mass:g}]", lambda: roundtrip_residual(solution, spec, probes), 1e-3)

        def refinement():
            grids = [ctx.cone_grid(n_u) for n_u in REFINEMENT_U_NODES]
            residuals = refinement_residuals(solution, mass, grids, probes[:5], ctx.schedule)
            rows.extend([mass, n_u, residual] for n_u, residual in zip(REFINEMENT_U_NODES, residuals))
            slope, _ = loglog_slope(REFINEMENT_U_NODES, residuals)
            return -slope, f"residuals={['%.2e' % r for r in residuals]}"

        ctx.record(SUITE, f"refinement_order[m={mass:g}]", refinement, minimum=1.0)

        def linearity():
            phi = restrict_to_V(solution, grid)
            other = ctx.generator.named_profile("TILTED_COSINE", grid)
            combined = phi.scaled(0.7) + other.scaled(-1.3)
            lhs = goursat_solve(combined, spec, probes[:5])
            rhs = 0.7 * goursat_solve(phi, spec, probes[:5]) - 1.3 * goursat_solve(other, spec, probes[:5])
            return float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(rhs)), 1e-300))

        ctx.record(SUITE, f"linearity[m={mass:g}]", linearity, 1e-8)

    ctx.add_table("goursat_convergence", ["mass", "n_u", "roundtrip_residual"], rows)
