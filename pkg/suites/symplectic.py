"""
Symplectic suite: restriction to V is symplectic, the boundary one-particle structure carries
sigma_V in its imaginary part, and the three representations of mu_lambda agree.
"""

import logging

import numpy as np

from data.synthetic_fields import sochockij_families
from models.grids import EpsSchedule
from physics.boundary import (
    boundary_product_kspace, k_transform, mu_lambda_hspace, mu_lambda_kernel, restrict_to_V, sigma_boundary,
    sochockij_compare, spectrum_product, weyl_product_check,
)
from physics.bulk import mu_vacuum, sigma_bulk
from suites.common import SuiteContext

logger = logging.getLogger(__name__)

SUITE = "symplectic"


def _normalized(solution):
    return solution.scaled(1.0 / np.sqrt(mu_vacuum(solution, solution)))


def _bulk_vs_boundary_sigma(ctx: SuiteContext, mass: float, n_pairs: int):
    grid = ctx.cone_grid()
    worst = 0.0
    for c1, c2 in ctx.generator.random_cauchy_pairs(n_pairs, ctx.cauchy_grid(), stream=1):
        s1, s2 = _normalized(ctx.solution(c1, mass)), _normalized(ctx.solution(c2, mass))
        bulk = sigma_bulk(s1, s2, ctx.flux_grid())
        boundary = sigma_boundary(restrict_to_V(s1, grid), restrict_to_V(s2, grid))
        worst = max(worst, abs(bulk - boundary))
    return worst, f"{n_pairs} normalized pairs"


def _imaginary_part(ctx: SuiteContext, n_pairs: int):
    worst = 0.0
    for phi1, phi2 in ctx.generator.random_boundary_pairs(n_pairs, ctx.profile_grid(), stream=2):
        product = boundary_product_kspace(phi1, phi2)
        worst = max(worst, abs(-2.0 * product.imag - sigma_boundary(phi1, phi2)))
    return worst


def _three_representations(ctx: SuiteContext, n_pairs: int):
    rows = []
    worst = 0.0
    for index, (phi1, phi2) in enumerate(ctx.generator.random_boundary_pairs(n_pairs, ctx.profile_grid(), stream=3)):
        spec1, spec2 = k_transform(phi1), k_transform(phi2)
        scale = np.sqrt(spectrum_product(spec1, spec1).real * spectrum_product(spec2, spec2).real)
        kspace = spectrum_product(spec1, spec2).real
        kernel = mu_lambda_kernel(phi1, phi2, ctx.schedule(phi1.grid))
        hspace = mu_lambda_hspace(phi1, phi2)
        spread = max(abs(kspace - kernel), abs(kspace - hspace), abs(kernel - hspace)) / scale
        worst = max(worst, spread)
        rows.append([index, kspace, kernel, hspace, spread])
    ctx.add_table("mu_lambda_representations", ["pair", "kspace", "kernel", "hspace", "relative_spread"], rows)
    return worst


def _sochockij(ctx: SuiteContext):
    sched = EpsSchedule.geometric(eps0=0.02, ratio=0.5, count=6, order=3)
    worst = 0.0
    for profile in sochockij_families():
        with_h, plain = sochockij_compare(profile, sched)
        worst = max(worst, abs(with_h - plain) / max(abs(plain), 1e-300))
    return worst


def _cauchy_schwarz(ctx: SuiteContext, n_pairs: int):
    """max of sigma^2 / (4 mu11 mu22), which must not exceed 1."""
    ratio = 0.0
    for phi1, phi2 in ctx.generator.random_boundary_pairs(n_pairs, ctx.profile_grid(), stream=4):
        spec1, spec2 = k_transform(phi1), k_transform(phi2)
        bound = 4.0 * spectrum_product(spec1, spec1).real * spectrum_product(spec2, spec2).real
        ratio = max(ratio, sigma_boundary(phi1, phi2) ** 2 / bound)
    return ratio


def _weyl(ctx: SuiteContext, n_pairs: int):
    worst = 0.0
    for phi1, phi2 in ctx.generator.random_boundary_pairs(n_pairs, ctx.profile_grid(), stream=5):
        lhs, rhs = weyl_product_check(phi1, phi2)
        worst = max(worst, abs(lhs - rhs))
    return worst


def run(ctx: SuiteContext) -> None:
    logger.info(f"Running suite [suite={SUITE}] [masses={ctx.config.masses}]")
    for mass in ctx.config.masses:
        ctx.record(SUITE, f"sigma_bulk_vs_boundary[m={mass:g}]",
                   lambda: _bulk_vs_boundary_sigma(ctx, mass, ctx.pairs(20)), 1e-6)
    ctx.record(SUITE, "imaginary_part_identity", lambda: _imaginary_part(ctx, ctx.pairs(50)), 1e-6)
    ctx.record(SUITE, "mu_lambda_three_representations", lambda: _three_representations(ctx, ctx.pairs(20)), 1e-4)
    ctx.record(SUITE, "sochockij_regularizer_independence", lambda: _sochockij(ctx), 1e-4)
    ctx.record(SUITE, "one_particle_cauchy_schwarz", lambda: _cauchy_schwarz(ctx, ctx.pairs(20)), 1.0, reference=0.0)
    ctx.record(SUITE, "weyl_product", lambda: _weyl(ctx, ctx.pairs(5)), 1e-8)
