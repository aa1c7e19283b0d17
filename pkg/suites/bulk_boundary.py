"""
Bulk-boundary suite: the vacuum form of bulk solutions agrees with the boundary state on their
restrictions, Cauchy data are reproduced at t = 1, and the causal geometry identities hold.
"""

import logging

import numpy as np

from data.synthetic_fields import random_points_in_double_cone, random_unit_vectors
from models.spacetime import SpacetimePoint
from physics.boundary import mu_lambda_kspace, restrict_to_V
from physics.bulk import mu_vacuum, solution_values
from physics.geometry import conformal_identity_residual, flow_u, sigma_distance, u_star
from physics.numerics import ball_quadrature
from suites.common import SuiteContext

logger = logging.getLogger(__name__)

SUITE = "bulk-boundary"


def _vacuum_vs_boundary(ctx: SuiteContext, mass: float, n_pairs: int):
    grid = ctx.cone_grid()
    worst = 0.0
    rows = []
    for index, (c1, c2) in enumerate(ctx.generator.random_cauchy_pairs(n_pairs, ctx.cauchy_grid())):
        s1, s2 = ctx.solution(c1, mass), ctx.solution(c2, mass)
        phi1, phi2 = restrict_to_V(s1, grid), restrict_to_V(s2, grid)
        for label, a, b, pa, pb in (("11", s1, s1, phi1, phi1), ("12", s1, s2, phi1, phi2)):
            vacuum = mu_vacuum(a, b)
            boundary = mu_lambda_kspace(pa, pb)
            discrepancy = abs(vacuum - boundary) / abs(vacuum)
            worst = max(worst, discrepancy)
            rows.append([mass, index, label, vacuum, boundary, discrepancy])
    ctx.add_table(f"bulk_boundary_mu_m{mass:g}", ["mass", "pair", "entry", "mu_vacuum", "mu_lambda", "relative"], rows)
    return worst, f"{n_pairs} pairs"


def _cauchy_roundtrip(ctx: SuiteContext, mass: float):
    cauchy = ctx.generator.cauchy_data("CENTERED_WIDE", ctx.cauchy_grid())
    solution = ctx.solution(cauchy, mass)
    points, _ = ball_quadrature(ctx.cauchy_grid())
    interior = np.linalg.norm(points, axis=1) < 0.6
    values = solution_values(solution, np.ones(interior.sum()), points[interior])
    return float(np.max(np.abs(values - cauchy.f[interior])) / np.max(np.abs(cauchy.f)))


def _geometry_identities(ctx: SuiteContext):
    rng = ctx.rng(11)
    points = random_points_in_double_cone(rng, 2000, margin=0.02)
    conformal = max(
        conformal_identity_residual(p, q) for p, q in zip(points[:1000], points[1000:])
    )
    directions = random_unit_vectors(rng, 1000)
    root = max(
        abs(sigma_distance(p, SpacetimePoint.on_cone(u_star(p, w), w)))
        for p, w in zip(points[:1000], directions)
    )
    u = rng.uniform(0.0, 1.0, 1000)
    tau1, tau2 = rng.uniform(-2.0, 2.0, 1000), rng.uniform(-2.0, 2.0, 1000)
    group = float(np.max(np.abs(flow_u(tau2, flow_u(tau1, u)) - flow_u(tau1 + tau2, u))))
    return conformal, root, group


def run(ctx: SuiteContext) -> None:
    logger.info(f"Running suite [suite={SUITE}] [masses={ctx.config.masses}]")
    n_pairs = ctx.pairs(10)
    for mass in ctx.config.masses:
        ctx.record(SUITE, f"mu_vacuum_vs_lambda[m={mass:g}]", lambda: _vacuum_vs_boundary(ctx, mass, n_pairs), 1e-3)
        ctx.record(SUITE, f"cauchy_roundtrip[m={mass:g}]", lambda: _cauchy_roundtrip(ctx, mass), 1e-3)

    identities = {}

    def geometry():
        identities.update(zip(("conformal", "root", "group"), _geometry_identities(ctx)))
        return identities["conformal"]

    ctx.record(SUITE, "conformal_identity", geometry, 1e-10)
    ctx.record(SUITE, "u_star_root", lambda: identities.get("root", float("nan")), 1e-12)
    ctx.record(SUITE, "flow_u_group_law", lambda: identities.get("group", float("nan")), 1e-12)
