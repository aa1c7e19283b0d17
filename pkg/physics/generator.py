"""
The modular generator on Klein-Gordon solutions.

For mass m the generator is delta^(m) = gamma^X + (delta^(m) - delta^(0)), where
    gamma^X phi = -X(phi) - (1/4) div X phi
and the difference is an integral over the part of V inside the past light cone of p:
    (delta^(m) - gamma^X) phi(p) = int dw int_0^{u*} 2u (2 - t - u) [F_m(sigma) + sigma F_m'(sigma)] d_u Phi du
with the entire kernel F_m(z) = (m^2 / 8 pi) sum_k (m^2/4)^k z^k / (k! (k+1)!).
"""

import logging
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

from models.boundary_data import BoundaryData
from models.fields import KGSolution
from models.flow import FmKernel, GoursatSpec, SymbolFit, SymbolSample
from models.spacetime import SpacetimePoint
from physics.boundary import restrict_to_V
from physics.bulk import evaluate_X_derivative, evaluate_dt, evaluate_gradient, evaluate_solution, solution_values
from physics.errors import DomainError
from physics.geometry import (
    cone_cutoff, killing_X, require_in_double_cone, sigma_batch, sigma_distance,
    sigma_gradients, u_star,
)
from physics.goursat import default_goursat_spec, goursat_solve
from physics.modular import beta_generator
from physics.numerics import (
    cone_quadratures, differentiate_on_nodes, gauss_legendre, legendre_coefficients, legendre_derivative,
    legendre_evaluate, loglog_slope, parallel_map, sphere_grid,
)

logger = logging.getLogger(__name__)

DerivativeSpec = Tuple[Tuple[int, ...], Tuple[int, ...]]


def fm_batch(m: float, z, kernel: Optional[FmKernel] = None) -> Tuple[np.ndarray, np.ndarray]:
    """F_m and F_m' by the power series, truncated once terms fall below rel_tol of the absolute sum."""
    z = np.asarray(z, dtype=float)
    if m == 0.0:
        return np.zeros_like(z), np.zeros_like(z)
    kernel = kernel or FmKernel(mass=m)
    a = 0.25 * m * m
    term = np.ones_like(z)
    value = np.ones_like(z)
    value_abs = np.ones_like(z)
    # F' series: sum_k (k+1) a^{k+1} z^k / ((k+1)! (k+2)!)
    d_term = np.full_like(z, a / 2.0)
    derivative = d_term.copy()
    derivative_abs = np.abs(d_term)
    for k in range(1, kernel.truncation_terms):
        term = term * a * z / (k * (k + 1))
        d_term = d_term * a * z * (k + 1) / (k * (k + 1) * (k + 2))
        value += term
        derivative += d_term
        value_abs += np.abs(term)
        derivative_abs += np.abs(d_term)
        if np.all(np.abs(term) < kernel.rel_tol * value_abs) and np.all(np.abs(d_term) < kernel.rel_tol * derivative_abs):
            break
    else:
        logger.warning(f"F_m series hit the term cap [m={m}, terms={kernel.truncation_terms}]")
    prefactor = m * m / (8.0 * np.pi)
    return prefactor * value, prefactor * derivative


def fm_eval(m: float, z: float) -> Tuple[float, float]:
    """(F_m(z), F_m'(z)); F_m(0) = m^2 / 8 pi and F_m'(0) = m^4 / 64 pi."""
    value, derivative = fm_batch(m, np.array([z], dtype=float))
    return float(value[0]), float(derivative[0])


def fm_bessel(m: float, z: float) -> Tuple[float, float]:
    """Closed forms through I_1, I_2 (z > 0) and J_1, J_2 (z < 0)."""
    if m == 0.0:
        return 0.0, 0.0
    if z == 0.0:
        return m * m / (8.0 * np.pi), m ** 4 / (64.0 * np.pi)
    root = np.sqrt(abs(z))
    if z > 0.0:
        value = m / (4.0 * np.pi) * special.iv(1, m * root) / root
        derivative = m * m / (8.0 * np.pi) * special.iv(2, m * root) / z
    else:
        value = m / (4.0 * np.pi) * special.jv(1, m * root) / root
        derivative = m * m / (8.0 * np.pi) * special.jv(2, m * root) / abs(z)
    return float(value), float(derivative)


def commutator_kernel(m: float, t: float, u, sigma) -> np.ndarray:
    """2u (2 - t - u) [F_m(sigma) + sigma F_m'(sigma)]."""
    value, derivative = fm_batch(m, sigma)
    u = np.asarray(u, dtype=float)
    return 2.0 * u * (2.0 - t - u) * (value + np.asarray(sigma) * derivative)


def gamma_X(s: KGSolution, p: SpacetimePoint) -> float:
    """-X(phi)(p) - (t - 1) phi(p)."""
    return -evaluate_X_derivative(s, p) - (p.t - 1.0) * evaluate_solution(s, p)


def _past_cone_rule(p: SpacetimePoint, directions: np.ndarray, n_u: int):
    cutoff = cone_cutoff(p.t, p.x_array, directions)
    if np.any(cutoff <= 0.0) or np.any(cutoff >= 1.0):
        raise DomainError(f"Cone cutoff outside (0, 1) [t={p.t}, x={p.x}]")
    ref = gauss_legendre(n_u, 0.0, 1.0)
    nodes = cutoff[:, None] * ref.nodes[None, :]
    weights = cutoff[:, None] * ref.weights[None, :]
    q_x = (directions[:, None, :] * nodes[..., None]).reshape(-1, 3)
    sigma = sigma_batch(p.t, p.x_array, nodes.ravel(), q_x).reshape(nodes.shape)
    return nodes, weights, sigma


def delta_diff(phi: BoundaryData, m: float, p: SpacetimePoint) -> float:
    """(delta^(m) - delta^(0)) phi at p from its boundary data; theta(u* - u) is the integration limit."""
    require_in_double_cone(p)
    if m == 0.0:
        return 0.0
    sphere, quad = cone_quadratures(phi.grid)
    nodes, weights, sigma = _past_cone_rule(p, sphere.directions, quad.size)
    slopes = legendre_evaluate(quad, legendre_derivative(quad, legendre_coefficients(quad, phi.values)), nodes)
    integrand = commutator_kernel(m, p.t, nodes, sigma) * slopes
    return float(sphere.weights @ np.sum(weights * integrand, axis=-1))


def delta_m(
    data: Union[KGSolution, BoundaryData],
    m: float,
    p: SpacetimePoint,
    spec: Optional[GoursatSpec] = None,
) -> float:
    """
    The modular generator delta^(m) phi at p.

    For a solution this is gamma^X phi + delta_diff of its restriction. Boundary data go through
    the boundary generator u (1 - u) d_u Phi followed by the Goursat reconstruction.
    """
    if isinstance(data, KGSolution):
        gamma = gamma_X(data, p)
        if m == 0.0:
            return gamma
        return gamma + delta_diff(restrict_to_V(data, spec.cone_grid if spec else None), m, p)
    spec = spec or default_goursat_spec(m, data.grid)
    return float(goursat_solve(beta_generator(data), spec, [p])[0])


def u_star_gradient(p: SpacetimePoint, omega) -> Tuple[float, np.ndarray]:
    """Analytic (d_t u*, grad_x u*) of u* = N / (2D), N = t^2 - |x|^2, D = t - w.x."""
    omega = np.asarray(omega, dtype=float)
    x = p.x_array
    numerator = p.t * p.t - x @ x
    denominator = p.t - omega @ x
    dt = (2.0 * p.t * denominator - numerator) / (2.0 * denominator ** 2)
    dx = (-2.0 * x * denominator + numerator * omega) / (2.0 * denominator ** 2)
    return float(dt), dx


def boundary_term_residual(p: SpacetimePoint, omega) -> float:
    """|u (1 - u) + X(u*)| at u = u*(p, w)."""
    u = u_star(p, omega)
    dt, dx = u_star_gradient(p, omega)
    killing = killing_X(p).vector_array
    return float(abs(u * (1.0 - u) + killing[0] * dt + killing[1:] @ dx))


def Z_apply(s: KGSolution, p: SpacetimePoint) -> float:
    """(1 + t d_t + x . grad) phi at p."""
    return evaluate_solution(s, p) + p.t * evaluate_dt(s, p) + p.x_array @ evaluate_gradient(s, p)


def Z_apply_callable(fn: Callable[[float, np.ndarray], float], p: SpacetimePoint, step: float = 1e-5) -> float:
    """Z on a generic function of (t, x) with central differences."""
    x = p.x_array
    value = fn(p.t, x)
    dt = (fn(p.t + step, x) - fn(p.t - step, x)) / (2.0 * step)
    gradient = np.array([
        (fn(p.t, x + step * e) - fn(p.t, x - step * e)) / (2.0 * step) for e in np.eye(3)
    ])
    return float(value + p.t * dt + x @ gradient)


def z_cone_residual(s: KGSolution, omega, n_u: int = 32) -> float:
    """sup along the ray of |Z(phi)(u, u w) - d_u (u phi(u, u w))|, relative to sup |Z(phi)|."""
    omega = np.asarray(omega, dtype=float)
    quad = gauss_legendre(n_u, 0.0, 1.0)
    u = quad.nodes
    x = u[:, None] * omega[None, :]
    ray = u * solution_values(s, u, x)
    expected = differentiate_on_nodes(quad, ray)
    z_values = np.array([Z_apply(s, SpacetimePoint(t=ui, x=xi)) for ui, xi in zip(u, x)])
    scale = np.max(np.abs(z_values))
    residual = float(np.max(np.abs(z_values - expected)))
    return residual / scale if scale > 0.0 else residual


def conformal_commutation_residual(m: float, p: SpacetimePoint, q: SpacetimePoint) -> float:
    """|gamma_p F(sigma) + gamma_q F(sigma) + (1/4)(div X(p) + div X(q)) (F + sigma F')| for F = F_m."""
    sigma = sigma_distance(p, q)
    value, derivative = fm_eval(m, sigma)
    grad_p, grad_q = sigma_gradients(p, q)
    killing_p, killing_q = killing_X(p), killing_X(q)

    def gamma(killing, gradient) -> float:
        return -derivative * (killing.vector_array @ gradient) - 0.25 * killing.divergence * value

    lhs = gamma(killing_p, grad_p) + gamma(killing_q, grad_q)
    rhs = -0.25 * (killing_p.divergence + killing_q.divergence) * (value + sigma * derivative)
    return float(abs(lhs - rhs))


def null_covector(spatial, future: bool = True) -> np.ndarray:
    """(+-|k|, k) for a spatial direction k; along these the phase k0 u + u k.w is stationary on the sphere."""
    spatial = np.asarray(spatial, dtype=float)
    norm = float(np.linalg.norm(spatial))
    if norm == 0.0:
        raise DomainError("Null covector needs a nonzero spatial part")
    return np.concatenate([[norm if future else -norm], spatial])


def attained_exponent(alpha: int, beta: int) -> float:
    """
    Decay exponent of sup |d_x^a d_k^b b| over null covectors.

    x-derivatives raise it by one each. k-derivatives leave it unchanged: the prefactor
    e^{-i<k, x>} contributes -i x b, and y - x never vanishes on V for x in D.
    """
    return -1.0 + alpha


def symbol_resolution(p: SpacetimePoint, k) -> Tuple[int, int, int]:
    """u-nodes and sphere grid for b(x, k); u-nodes grow as 10 + 3 |k| u*."""
    k_norm = float(np.linalg.norm(k))
    probe = sphere_grid(8, 16)
    largest_cutoff = float(np.max(cone_cutoff(p.t, p.x_array, probe.directions)))
    n_u = int(np.ceil(10 + 3.0 * k_norm * largest_cutoff))
    n_theta = int(np.ceil(10 + 0.6 * k_norm))
    return n_u, n_theta, 2 * n_theta


def symbol_b(p: SpacetimePoint, k, m: float, resolution: Optional[Tuple[int, int, int]] = None) -> complex:
    """
    b(x, k) = e^{-i<k, x>} int dw int_0^{u*} e^{i(k0 u + u k.w)} g du with
    g = (2 pi)^-4 commutator_kernel and <k, x> = k0 t + k.x.
    """
    require_in_double_cone(p)
    k = np.asarray(k, dtype=float)
    if m == 0.0:
        return 0j
    n_u, n_theta, n_phi = resolution or symbol_resolution(p, k)
    sphere = sphere_grid(n_theta, n_phi)
    nodes, weights, sigma = _past_cone_rule(p, sphere.directions, n_u)
    g = commutator_kernel(m, p.t, nodes, sigma) / (2.0 * np.pi) ** 4
    phase = np.exp(1j * nodes * (k[0] + (sphere.directions @ k[1:]))[:, None])
    integral = sphere.weights @ np.sum(weights * phase * g, axis=-1)
    return complex(np.exp(-1j * (k[0] * p.t + k[1:] @ p.x_array)) * integral)


def symbol_sample(p: SpacetimePoint, k, m: float) -> SymbolSample:
    return SymbolSample(x=p, k=tuple(float(c) for c in k), value=symbol_b(p, k, m))


def _shifted_point(p: SpacetimePoint, axis: int, step: float) -> SpacetimePoint:
    coords = np.concatenate([[p.t], p.x_array])
    coords[axis] += step
    return SpacetimePoint(t=float(coords[0]), x=coords[1:])


def symbol_derivative(p: SpacetimePoint, k, m: float, orders: DerivativeSpec, step: float = 1e-3,
                      resolution: Optional[Tuple[int, int, int]] = None) -> complex:
    """Nested central differences of b in x (axes of orders[0]) and k (axes of orders[1])."""
    k = np.asarray(k, dtype=float)
    resolution = resolution or symbol_resolution(p, k)
    x_axes, k_axes = orders
    if x_axes:
        axis, rest = x_axes[0], (x_axes[1:], k_axes)
        return (symbol_derivative(_shifted_point(p, axis, step), k, m, rest, step, resolution)
                - symbol_derivative(_shifted_point(p, axis, -step), k, m, rest, step, resolution)) / (2.0 * step)
    if k_axes:
        axis, rest = k_axes[0], ((), k_axes[1:])
        shift = np.zeros(4)
        shift[axis] = step
        return (symbol_derivative(p, k + shift, m, rest, step, resolution)
                - symbol_derivative(p, k - shift, m, rest, step, resolution)) / (2.0 * step)
    return symbol_b(p, k, m, resolution)


def symbol_decay_table(p: SpacetimePoint, m: float, directions: Sequence, k_norms: Iterable[float],
                       orders: DerivativeSpec, step: float = 1e-3) -> List[Tuple[float, int, float]]:
    """Rows (|k|, direction id, |d_x^a d_k^b b|)."""
    units = [np.asarray(d, dtype=float) / np.linalg.norm(d) for d in directions]
    jobs = [(float(norm), index, unit) for norm in k_norms for index, unit in enumerate(units)]

    def evaluate(job) -> Tuple[float, int, float]:
        norm, index, unit = job
        return norm, index, abs(symbol_derivative(p, norm * unit, m, orders, step))

    return parallel_map(evaluate, jobs)


def symbol_decay_fit(
    p: SpacetimePoint,
    m: float,
    directions: Sequence,
    k_range: Tuple[float, float],
    orders: DerivativeSpec = ((), ()),
    n_k: int = 7,
    step: float = 1e-3,
    max_residual: float = 0.5,
) -> SymbolFit:
    """Log-log slope of sup over directions of |d_x^a d_k^b b| against |k|."""
    k_min, k_max = k_range
    if k_min < 2.0 or k_max <= k_min:
        raise DomainError(f"Symbol scan needs 2 <= k_min < k_max [range={k_range}]")
    k_norms = np.geomspace(k_min, k_max, n_k)
    table = symbol_decay_table(p, m, directions, k_norms, orders, step)
    magnitudes = [max(row[2] for row in table if row[0] == norm) for norm in k_norms]
    slope, residual = loglog_slope(k_norms, magnitudes, max_residual)
    alpha, beta = len(orders[0]), len(orders[1])
    logger.info(f"Symbol decay fit [alpha={alpha}, beta={beta}, slope={slope:.3f}, residual={residual:.3e}]")
    return SymbolFit(
        alpha=alpha,
        beta=beta,
        slope=slope,
        residual=residual,
        expected=attained_exponent(alpha, beta),
        class_exponent=-1.0 + alpha - beta,
        k_norms=tuple(float(v) for v in k_norms),
        magnitudes=tuple(float(v) for v in magnitudes),
    )
