"""
Causal geometry of the unit double cone D = {|t - 1| + |x| < 1}.

The conformal Killing field
    X = ((t^2 + |x|^2)/2 - t) d_t + (t - 1) x . grad
preserves D and its lower null boundary V = {t = |x|, 0 <= t <= 1}; on V it reduces to
u(u - 1) d_u. Batch helpers take t with shape (N,) and x with shape (N, 3).
"""

import logging

import numpy as np

from models.spacetime import KillingSample, LightconeCoord, SpacetimePoint
from physics.errors import DomainError

logger = logging.getLogger(__name__)


def to_lightcone(p: SpacetimePoint) -> LightconeCoord:
    """u = (t + r)/2, v = (t - r)/2, omega = x/r."""
    r = p.radius
    if r == 0.0:
        raise DomainError(f"Direction undefined at the spatial origin [t={p.t}]")
    return LightconeCoord(u=0.5 * (p.t + r), v=0.5 * (p.t - r), omega=p.x_array / r)


def from_lightcone(c: LightconeCoord) -> SpacetimePoint:
    return SpacetimePoint(t=c.u + c.v, x=(c.u - c.v) * np.asarray(c.omega))


def sigma_distance(p: SpacetimePoint, q: SpacetimePoint) -> float:
    """Signed squared geodesic distance -(t - t')^2 + |x - x'|^2."""
    dx = p.x_array - q.x_array
    return float(-(p.t - q.t) ** 2 + dx @ dx)


def sigma_complex(tc: complex, x, q: SpacetimePoint) -> complex:
    """sigma with a complexified time coordinate for the first argument."""
    dx = np.asarray(x, dtype=float) - q.x_array
    return complex(-(complex(tc) - q.t) ** 2 + dx @ dx)


def sigma_batch(tc, x, q_t, q_x) -> np.ndarray:
    """sigma((tc, x), (q_t, q_x)) for one first point and many second points; tc may be complex."""
    dx = np.asarray(x, dtype=float) - np.asarray(q_x, dtype=float)
    return -(tc - np.asarray(q_t)) ** 2 + np.sum(dx * dx, axis=-1)


def in_double_cone(p: SpacetimePoint) -> bool:
    return bool(abs(p.t - 1.0) + p.radius < 1.0)


def require_in_double_cone(p: SpacetimePoint) -> None:
    if not in_double_cone(p):
        raise DomainError(f"Point outside the double cone [t={p.t}, x={p.x}]")


def killing_components(t, x):
    """X^t, X^x (shape (..., 3)) and div X at many points."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    x_t = 0.5 * (t * t + r2) - t
    x_space = (t - 1.0)[..., None] * x
    return x_t, x_space, 4.0 * (t - 1.0)


def killing_X(p: SpacetimePoint) -> KillingSample:
    x_t, x_space, divergence = killing_components(p.t, p.x_array)
    return KillingSample(vector=(float(x_t), *map(float, x_space)), divergence=float(divergence))


def flow_u(tau, u):
    """Flow of u(u - 1) d_u on [0, 1]: u / (u + e^tau (1 - u))."""
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 0.0) or np.any(u_arr > 1.0):
        raise DomainError("flow_u is defined for u in [0, 1]")
    result = u_arr / (u_arr + np.exp(tau) * (1.0 - u_arr))
    return float(result) if result.ndim == 0 else result


def cone_cutoff(t: float, x, directions) -> np.ndarray:
    """u*(t, x, omega) = (t^2 - |x|^2) / (2 (t - omega . x)) for many directions."""
    x = np.asarray(x, dtype=float)
    denominator = t - np.asarray(directions, dtype=float) @ x
    return (t * t - x @ x) / (2.0 * denominator)


def u_star(p: SpacetimePoint, omega) -> float:
    """The u at which the past light cone of p meets the ray of V in direction omega."""
    require_in_double_cone(p)
    omega = np.asarray(omega, dtype=float)
    denominator = p.t - omega @ p.x_array
    if denominator <= 0.0:
        raise DomainError(f"t - omega.x must be positive inside the double cone [value={denominator}]")
    value = float(cone_cutoff(p.t, p.x_array, omega[None, :])[0])
    root_residual = abs(sigma_distance(p, SpacetimePoint.on_cone(value, omega)))
    if not 0.0 < value < 1.0 or root_residual > 1e-12:
        raise DomainError(f"u* postcondition violated [u*={value}, residual={root_residual:.3e}]")
    return value


def sigma_gradients(p: SpacetimePoint, q: SpacetimePoint):
    """Analytic gradients of sigma with respect to p and to q, as 4-vectors (d_t, d_x)."""
    dt = p.t - q.t
    dx = p.x_array - q.x_array
    grad_p = np.concatenate([[-2.0 * dt], 2.0 * dx])
    return grad_p, -grad_p


def conformal_identity_residual(p: SpacetimePoint, q: SpacetimePoint) -> float:
    """|X_p(sigma) + X_q(sigma) - (div X(p) + div X(q)) sigma / 4|."""
    grad_p, grad_q = sigma_gradients(p, q)
    killing_p = killing_X(p)
    killing_q = killing_X(q)
    lhs = killing_p.vector_array @ grad_p + killing_q.vector_array @ grad_q
    rhs = 0.25 * (killing_p.divergence + killing_q.divergence) * sigma_distance(p, q)
    return float(abs(lhs - rhs))
