"""
KMS suite: the h-space one-particle structure intertwines beta_tau with e^{i tau h},
satisfies the reality condition of a KMS state at inverse temperature 2 pi, and its
flowed two-point function has the KMS boundary property on the strip.
"""

import logging

import numpy as np

from physics.boundary import ell_resample, hspace_product
from physics.modular import (
    beta_flow_boundary, kms_boundary_comparison, kms_reality_check, modular_unitary_hspace, strip_scan,
    thermal_norm,
)
from suites.common import SuiteContext

logger = logging.getLogger(__name__)

SUITE = "kms"


def _intertwining(ctx: SuiteContext, taus):
    worst = 0.0
    for phi, _ in ctx.generator.random_boundary_pairs(ctx.pairs(5), ctx.profile_grid(), stream=41):
        spec = ell_resample(phi)
        norm = np.sqrt(thermal_norm(spec))
        for tau in taus:
            flowed = ell_resample(beta_flow_boundary(phi, -tau))
            rotated = modular_unitary_hspace(spec, tau)
            difference = rotated.with_values(flowed.values - rotated.values)
            worst = max(worst, np.sqrt(max(thermal_norm(difference), 0.0)) / norm)
    return worst


def _unitarity(ctx: SuiteContext, taus):
    phi = ctx.generator.named_profile("TILTED_COSINE", ctx.profile_grid())
    spec = ell_resample(phi)
    reference = thermal_norm(spec)
    return max(abs(thermal_norm(modular_unitary_hspace(spec, tau)) - reference) / reference for tau in taus)


def _reality(ctx: SuiteContext):
    return max(kms_reality_check(ell_resample(phi))
               for phi, _ in ctx.generator.random_boundary_pairs(ctx.pairs(5), ctx.profile_grid(), stream=42))


def _negative_control(ctx: SuiteContext):
    spec = ell_resample(ctx.generator.named_profile("TILTED_COSINE", ctx.profile_grid()))
    return kms_reality_check(spec.with_values(spec.values * np.exp(0.3j)))


def _strip(ctx: SuiteContext, taus):
    phi1, phi2 = ctx.generator.random_boundary_pairs(1, ctx.profile_grid(), stream=43)[0]
    largest, bound = strip_scan(ell_resample(phi1), ell_resample(phi2), taus)
    return largest / bound, f"max|F|={largest:.4e}, bound={bound:.4e}"


def _boundary_relation(ctx: SuiteContext, taus):
    phi1, phi2 = ctx.generator.random_boundary_pairs(1, ctx.profile_grid(), stream=44)[0]
    comparison = kms_boundary_comparison(phi1, phi2, taus)
    rows = [
        [tau, upper.real, upper.imag, rev.real, rev.imag, fwd.real, fwd.imag]
        for tau, upper, rev, fwd in zip(comparison.taus, comparison.upper_boundary,
                                         comparison.reversed_swap, comparison.forward_swap)
    ]
    ctx.add_table("kms_strip_traces",
                  ["tau", "F_upper_re", "F_upper_im", "reversed_re", "reversed_im", "forward_re", "forward_im"], rows)
    spec1, spec2 = ell_resample(phi1), ell_resample(phi2)
    lower = []
    for tau in taus:
        value = hspace_product(spec1, spec2, tau)
        lower.append([tau, value.real, value.imag])
    ctx.add_table("kms_lower_traces", ["tau", "F_re", "F_im"], lower)
    best = min(comparison.reversed_residual, comparison.forward_residual)
    return best, f"matching_convention={comparison.matching_convention}"


def run(ctx: SuiteContext) -> None:
    taus = ctx.geometric_taus()
    logger.info(f"Running suite [suite={SUITE}] [taus={taus}]")
    trace_taus = list(np.linspace(-3.0, 3.0, 25))
    ctx.record(SUITE, "intertwining_one_particle", lambda: _intertwining(ctx, taus), 1e-6)
    ctx.record(SUITE, "unitary_norm_preservation", lambda: _unitarity(ctx, taus), 1e-12)
    ctx.record(SUITE, "kms_reality_condition", lambda: _reality(ctx), 1e-8)
    ctx.record(SUITE, "kms_reality_negative_control", lambda: _negative_control(ctx), minimum=1e-3)
    ctx.record(SUITE, "strip_boundedness", lambda: _strip(ctx, trace_taus), 1.0 + 1e-9)
    ctx.record(SUITE, "kms_boundary_relation", lambda: _boundary_relation(ctx, trace_taus), 1e-4)
