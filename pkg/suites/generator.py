"""
Generator suite: the kernel F_m, the explicit generator delta^(m) = gamma^X + delta_diff
against finite differences of the flow s_tau, and the identities its derivation relies on.
"""

import logging

import numpy as np

from data.synthetic_fields import random_points_in_double_cone, random_unit_vectors
from models.flow import FlowParams
from physics.boundary import restrict_to_V
from physics.bulk import propagator_batch
from physics.generator import (
    boundary_term_residual, conformal_commutation_residual, delta_diff, delta_m, fm_bessel, fm_eval, gamma_X,
)
from physics.goursat import default_goursat_spec
from physics.modular import s_tau
from physics.numerics import loglog_slope
from suites.common import SuiteContext

logger = logging.getLogger(__name__)

SUITE = "generator"

FD_STEPS = (0.2, 0.1, 0.05)


def _fm_vs_bessel(ctx: SuiteContext):
    rng = ctx.rng(51)
    worst = 0.0
    for m, z in zip(rng.uniform(0.5, 2.0, 20), rng.uniform(-4.0, 4.0, 20)):
        series, bessel = fm_eval(m, z), fm_bessel(m, z)
        worst = max(worst, *(abs(a - b) / abs(b) for a, b in zip(series, bessel)))
    return worst


def _propagator_smooth_part(ctx: SuiteContext):
    """Delta_m - Delta_0 inside the past light cone tends to F_m(sigma) as eps -> 0."""
    rng = ctx.rng(52)
    worst = 0.0
    for m in (0.5, 1.0, 2.0):
        q_t = rng.uniform(0.0, 0.4, 5)
        q_x = 0.3 * random_unit_vectors(rng, 5) * rng.uniform(0.0, 1.0, (5, 1))
        tc = 1.2 - 1e-7j
        x = np.zeros(3)
        difference = propagator_batch(m, tc, x, q_t, q_x) - propagator_batch(0.0, tc, x, q_t, q_x)
        sigma = -(1.2 - q_t) ** 2 + np.sum(q_x * q_x, axis=1)
        expected = np.array([fm_bessel(m, s)[0] for s in sigma])
        worst = max(worst, float(np.max(np.abs(difference - expected) / np.abs(expected))))
    return worst


def _boundary_term(ctx: SuiteContext):
    rng = ctx.rng(53)
    points = random_points_in_double_cone(rng, 1000, margin=0.01)
    directions = random_unit_vectors(rng, 1000)
    return max(boundary_term_residual(p, w) for p, w in zip(points, directions))


def _massless_generator(ctx: SuiteContext, probes):
    solution = ctx.solution(ctx.generator.cauchy_data("CENTERED_WIDE", ctx.cauchy_grid()), 0.0)
    return max(abs(delta_m(solution, 0.0, p) - gamma_X(solution, p)) for p in probes)


def _flow_finite_differences(ctx: SuiteContext, mass: float, probes, rows):
    solution = ctx.solution(ctx.generator.cauchy_data("OFFSET_X", ctx.cauchy_grid()), mass)
    grid = ctx.cone_grid()
    spec = default_goursat_spec(mass, grid, ctx.schedule(grid))
    phi = restrict_to_V(solution, grid)
    exact = np.array([delta_m(solution, mass, p, spec) for p in probes])
    scale = np.max(np.abs(exact))
    errors = []
    for step in FD_STEPS:
        forward = s_tau(phi, FlowParams(tau=step, mass=mass), probes, spec)
        backward = s_tau(phi, FlowParams(tau=-step, mass=mass), probes, spec)
        error = float(np.max(np.abs((forward - backward) / (2.0 * step) - exact)) / scale)
        errors.append(error)
        rows.append([mass, step, error])
    order, _ = loglog_slope(FD_STEPS, errors)
    return order, f"errors={['%.2e' % e for e in errors]}"


def _boundary_route(ctx: SuiteContext, mass: float, probes):
    solution = ctx.solution(ctx.generator.cauchy_data("OFFSET_X", ctx.cauchy_grid()), mass)
    grid = ctx.cone_grid()
    spec = default_goursat_spec(mass, grid, ctx.schedule(grid))
    bulk = np.array([delta_m(solution, mass, p, spec) for p in probes])
    boundary = np.array([delta_m(restrict_to_V(solution, grid), mass, p, spec) for p in probes])
    return float(np.max(np.abs(bulk - boundary)) / np.max(np.abs(bulk)))


def _conformal_commutation(ctx: SuiteContext):
    rng = ctx.rng(54)
    points = random_points_in_double_cone(rng, 200, margin=0.02)
    return max(conformal_commutation_residual(1.0, p, q) for p, q in zip(points[:100], points[100:]))


def _delta_diff_linearity(ctx: SuiteContext, probes):
    grid = ctx.profile_grid()
    phi1 = ctx.generator.named_profile("TILTED_COSINE", grid)
    phi2 = ctx.generator.named_profile("ISOTROPIC_SLOW", grid)
    combined = phi1.scaled(2.0) + phi2.scaled(-0.5)
    worst = 0.0
    for p in probes:
        lhs = delta_diff(combined, 1.0, p)
        rhs = 2.0 * delta_diff(phi1, 1.0, p) - 0.5 * delta_diff(phi2, 1.0, p)
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return worst


def run(ctx: SuiteContext) -> None:
    logger.info(f"Running suite [suite={SUITE}] [masses={ctx.config.masses}]")
    probes = random_points_in_double_cone(ctx.rng(55), 10, margin=0.15)
    rows = []
    ctx.record(SUITE, "fm_series_vs_bessel", lambda: _fm_vs_bessel(ctx), 1e-10)
    ctx.record(SUITE, "propagator_smooth_part", lambda: _propagator_smooth_part(ctx), 1e-5)
    ctx.record(SUITE, "boundary_term_vanishes", lambda: _boundary_term(ctx), 1e-10)
    ctx.record(SUITE, "massless_generator_is_gamma", lambda: _massless_generator(ctx, probes), 1e-6)
    ctx.record(SUITE, "conformal_commutation", lambda: _conformal_commutation(ctx), 1e-8)
    ctx.record(SUITE, "delta_diff_linearity", lambda: _delta_diff_linearity(ctx, probes[:3]), 1e-10)
    for mass in [m for m in ctx.config.masses if m > 0.0]:
        ctx.record(SUITE, f"generator_fd_order[m={mass:g}]",
                   lambda: _flow_finite_differences(ctx, mass, probes, rows), minimum=1.8)
        ctx.record(SUITE, f"generator_boundary_route[m={mass:g}]", lambda: _boundary_route(ctx, mass, probes), 1e-3)
    ctx.add_table("generator_fd_convergence", ["mass", "step", "relative_error"], rows)
