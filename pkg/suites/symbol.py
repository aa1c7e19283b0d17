"""
Symbol suite: decay of the generator-difference amplitude b(x, k) and its derivatives,
and the cone identity of the operator Z = 1 + t d_t + x . grad.

Decay fits run along null covectors, where |b| is largest for large |k|; along spatial
covectors b falls off one order faster.
"""

import logging

import numpy as np

from models.spacetime import SpacetimePoint
from physics.generator import (
    Z_apply_callable, attained_exponent, null_covector, symbol_b, symbol_decay_fit, symbol_decay_table,
    z_cone_residual,
)
from suites.common import SuiteContext

logger = logging.getLogger(__name__)

SUITE = "symbol"

SCAN_POINT = SpacetimePoint(t=1.1, x=(0.1, -0.05, 0.08))
SCAN_DIRECTIONS = [
    null_covector((1.0, 0.0, 0.0)),
    null_covector((0.0, 1.0, 0.0)),
    null_covector((0.0, 0.0, 1.0)),
    null_covector((1.0, 1.0, 0.0), future=False),
    null_covector((1.0, 0.0, -1.0)),
    null_covector((1.0, 1.0, 1.0), future=False),
]
SPATIAL_DIRECTIONS = [
    (0.0, 1.0, 0.0, 0.0),
    (0.0, 0.0, 0.0, 1.0),
    (0.0, 1.0, 1.0, 0.0),
]
K_RANGE = (4.0, 64.0)
DERIVATIVES = [
    ((), ()),
    ((), (1,)),
    ((1,), ()),
    ((), (1, 2)),
    ((1,), (2,)),
    ((0, 1), ()),
]


def _bounded_decay(ctx: SuiteContext, mass: float):
    k_norms = np.geomspace(*K_RANGE, 5)
    directions = SCAN_DIRECTIONS + SPATIAL_DIRECTIONS
    table = symbol_decay_table(SCAN_POINT, mass, directions, k_norms, ((), ()))
    ratios = []
    for index in range(len(directions)):
        weighted = [(1.0 + norm) * value for norm, d, value in table if d == index]
        ratios.append(max(weighted) / weighted[0])
    return max(ratios), f"per-direction ratios={['%.2f' % r for r in ratios]}"


def _zero_momentum(mass: float):
    value = symbol_b(SCAN_POINT, np.zeros(4), mass)
    return abs(value.imag) / abs(value.real)


def _z_homogeneous():
    """Z acts as 1 + degree on homogeneous functions."""
    def quadratic(t, x):
        return t * x[0] - 0.5 * x[1] * x[2]

    expected = 3.0 * quadratic(SCAN_POINT.t, SCAN_POINT.x_array)
    return abs(Z_apply_callable(quadratic, SCAN_POINT) - expected) / abs(expected)


def run(ctx: SuiteContext) -> None:
    masses = [m for m in ctx.config.masses if m > 0.0] or [1.0]
    logger.info(f"Running suite [suite={SUITE}] [masses={masses}]")
    fits = []
    for mass in masses:
        for orders in DERIVATIVES:
            alpha, beta = len(orders[0]), len(orders[1])
            expected = attained_exponent(alpha, beta)
            tolerance = 0.15 if alpha + beta == 0 else 0.2
            name = f"symbol_decay[m={mass:g},x={''.join(map(str, orders[0])) or '-'},k={''.join(map(str, orders[1])) or '-'}]"

            def fit():
                result = symbol_decay_fit(SCAN_POINT, mass, SCAN_DIRECTIONS, K_RANGE, orders)
                fits.append({"mass": mass, "orders": [list(orders[0]), list(orders[1])], **result.model_dump()})
                ctx.add_table(
                    f"symbol_decay_m{mass:g}_x{''.join(map(str, orders[0])) or 'none'}_k{''.join(map(str, orders[1])) or 'none'}",
                    ["k_norm", "sup_abs_derivative"],
                    [[k, v] for k, v in zip(result.k_norms, result.magnitudes)],
                )
                return result.slope, f"residual={result.residual:.3e}"

            ctx.record(SUITE, name, fit, tolerance, reference=expected)
        ctx.record(SUITE, f"symbol_bounded_decay[m={mass:g}]", lambda: _bounded_decay(ctx, mass), 10.0)
        ctx.record(
            SUITE, f"symbol_decay_spatial[m={mass:g}]",
            lambda: symbol_decay_fit(SCAN_POINT, mass, SPATIAL_DIRECTIONS, K_RANGE, n_k=5).slope,
            0.2, reference=-2.0,
        )
        ctx.record(SUITE, f"symbol_zero_momentum_real[m={mass:g}]", lambda: _zero_momentum(mass), 1e-12)

    ctx.record(SUITE, "symbol_massless_vanishes", lambda: abs(symbol_b(SCAN_POINT, (0.0, 3.0, 0.0, 0.0), 0.0)), 0.0)
    solution = ctx.solution(ctx.generator.cauchy_data("OFFSET_DIAGONAL", ctx.cauchy_grid()), masses[0])
    ctx.record(SUITE, "z_cone_identity", lambda: max(
        z_cone_residual(solution, w) for w in np.eye(3)), 1e-6)
    ctx.record(SUITE, "z_on_homogeneous_quadratic", lambda: _z_homogeneous(), 1e-8)
    ctx.add_summary("symbol_decay_fits", fits)
