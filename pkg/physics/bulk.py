"""
Klein-Gordon solutions in the double cone as plane-wave superpositions.

A solution with Cauchy data (f, g) on the t = 1 disc is carried by
    a(k) = 1/2 e^{iE} (2 pi)^{-3/2} int [ sqrt(2E) f(x) + i sqrt(2/E) g(x) ] e^{-ik.x} d^3x
and evaluated as
    phi(t, x) = 2 Re (2 pi)^{-3/2} int (2E)^{-1/2} a(k) e^{i(k.x - E t)} d^3k,
which is real by construction and reproduces (f, g) at t = 1. In this normalization
<a1, a2> = mu - (i/2) sigma with mu the vacuum one-particle product.
"""

import logging
from typing import Optional

import numpy as np
from scipy import special

from config.settings import settings
from models.fields import CauchyData, KGSolution, ModeAmplitude
from models.grids import BallGrid
from models.spacetime import SpacetimePoint
from physics.errors import DomainError, GridError, MassMismatchError, UnregularizedError
from physics.geometry import killing_components, sigma_batch
from physics.numerics import ball_quadrature, parallel_map

logger = logging.getLogger(__name__)

INV_2PI_32 = (2.0 * np.pi) ** -1.5


def default_momentum_grid() -> BallGrid:
    n_theta, n_phi = settings.parse_sphere(settings.MOMENTUM_SPHERE)
    return BallGrid(
        radius=settings.MOMENTUM_K_MAX,
        n_radial=settings.MOMENTUM_RADIAL_NODES,
        n_theta=n_theta,
        n_phi=n_phi,
    )


def default_disc_grid() -> BallGrid:
    n_theta, n_phi = settings.parse_sphere(settings.DISC_SPHERE)
    return BallGrid(radius=1.0, n_radial=settings.DISC_RADIAL_NODES, n_theta=n_theta, n_phi=n_phi)


def energy(k: np.ndarray, mass: float) -> np.ndarray:
    return np.sqrt(mass * mass + np.sum(k * k, axis=-1))


def _chunks(n: int):
    size = settings.EVAL_CHUNK
    return [slice(start, min(start + size, n)) for start in range(0, n, size)]


def _profile(s: np.ndarray, profile: str, shape: float) -> np.ndarray:
    inside = s < 1.0
    out = np.zeros_like(s)
    if profile == "bump":
        out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    elif profile == "kaiser":
        # I0(shape sqrt(1-s^2)) / I0(shape), spectrally concentrated below |k| ~ shape / radius
        root = np.sqrt(1.0 - s[inside] ** 2)
        out[inside] = special.i0e(shape * root) / special.i0e(shape) * np.exp(shape * (root - 1.0))
    else:
        raise ValueError(f"Unknown Cauchy profile {profile!r}")
    return out


def make_bump_cauchy(
    center,
    radius: float,
    amplitude_f: float,
    amplitude_g: float,
    grid: Optional[BallGrid] = None,
    profile: str = "bump",
    shape: float = 10.0,
) -> CauchyData:
    """
    Compactly supported Cauchy data amplitude * exp(-1/(1 - s^2)), s = |x - center| / radius.

    profile="kaiser" swaps in a Kaiser-Bessel window of the given shape parameter, whose
    spectrum is concentrated enough for band-limited momentum grids.
    """
    grid = grid or default_disc_grid()
    center = np.asarray(center, dtype=float)
    support = float(np.linalg.norm(center) + radius)
    if radius <= 0.0 or support >= 1.0:
        raise DomainError(f"Bump support leaves the Cauchy disc [|center|+radius={support:.3f}]")
    points, _ = ball_quadrature(grid)
    s = np.linalg.norm(points - center, axis=1) / radius
    shape_values = _profile(s, profile, shape)
    return CauchyData(
        grid=grid,
        f=amplitude_f * shape_values,
        g=amplitude_g * shape_values,
        support_radius=support,
    )


def modes_from_cauchy(data: CauchyData, m: float, kgrid: Optional[BallGrid] = None) -> ModeAmplitude:
    """Momentum amplitudes a(k) of the solution with Cauchy data (f, g) at t = 1."""
    if m < 0.0:
        raise DomainError(f"Mass must be non-negative [m={m}]")
    kgrid = kgrid or default_momentum_grid()
    k, _ = ball_quadrature(kgrid)
    x, w = ball_quadrature(data.grid)
    E = energy(k, m)
    wf = w * data.f
    wg = w * data.g

    def transform(sl: slice) -> np.ndarray:
        kernel = np.exp(-1j * (k[sl] @ x.T))
        return np.sqrt(2.0 * E[sl]) * (kernel @ wf) + 1j * np.sqrt(2.0 / E[sl]) * (kernel @ wg)

    values = np.concatenate(parallel_map(transform, _chunks(k.shape[0])))
    values *= 0.5 * np.exp(1j * E) * INV_2PI_32
    logger.debug(f"Computed mode amplitudes [mass={m}, modes={values.size}, disc_points={x.shape[0]}]")
    return ModeAmplitude(mass=m, grid=kgrid, values=values)


def solution_from_cauchy(data: CauchyData, m: float, kgrid: Optional[BallGrid] = None) -> KGSolution:
    return KGSolution(modes=modes_from_cauchy(data, m, kgrid))


def _mode_sum(s: KGSolution, t, x, kind: str) -> np.ndarray:
    k, w = ball_quadrature(s.modes.grid)
    E = energy(k, s.mass)
    base = INV_2PI_32 * w * s.modes.values / np.sqrt(2.0 * E)
    if kind == "value":
        weights = base[:, None]
    elif kind == "dt":
        weights = (-1j * E * base)[:, None]
    elif kind == "grad":
        weights = 1j * k * base[:, None]
    else:
        raise ValueError(f"Unknown derivative kind {kind!r}")

    t = np.atleast_1d(np.asarray(t, dtype=float))
    x = np.asarray(x, dtype=float).reshape(-1, 3)

    def evaluate(sl: slice) -> np.ndarray:
        phase = x[sl] @ k.T - t[sl, None] * E[None, :]
        return 2.0 * np.real(np.exp(1j * phase) @ weights)

    out = np.concatenate(parallel_map(evaluate, _chunks(t.size)), axis=0)
    return out[:, 0] if kind != "grad" else out


def solution_values(s: KGSolution, t, x) -> np.ndarray:
    return _mode_sum(s, t, x, "value")


def solution_dt(s: KGSolution, t, x) -> np.ndarray:
    return _mode_sum(s, t, x, "dt")


def solution_gradient(s: KGSolution, t, x) -> np.ndarray:
    return _mode_sum(s, t, x, "grad")


def solution_X_derivative(s: KGSolution, t, x) -> np.ndarray:
    """X(phi) from exact mode derivatives."""
    x_t, x_space, _ = killing_components(t, np.asarray(x, dtype=float).reshape(-1, 3))
    return x_t * solution_dt(s, t, x) + np.sum(x_space * solution_gradient(s, t, x), axis=-1)


def evaluate_solution(s: KGSolution, p: SpacetimePoint) -> float:
    return float(solution_values(s, [p.t], [p.x])[0])


def evaluate_dt(s: KGSolution, p: SpacetimePoint) -> float:
    return float(solution_dt(s, [p.t], [p.x])[0])


def evaluate_gradient(s: KGSolution, p: SpacetimePoint) -> np.ndarray:
    return solution_gradient(s, [p.t], [p.x])[0]


def evaluate_X_derivative(s: KGSolution, p: SpacetimePoint) -> float:
    return float(solution_X_derivative(s, [p.t], [p.x])[0])


def _require_same_mass(s1: KGSolution, s2: KGSolution) -> None:
    if s1.mass != s2.mass:
        raise MassMismatchError(f"Solutions have different masses [m1={s1.mass}, m2={s2.mass}]")


def sigma_bulk(s1: KGSolution, s2: KGSolution, disc_grid: Optional[BallGrid] = None) -> float:
    """Symplectic form int_{t=1} (phi2 d_t phi1 - phi1 d_t phi2) d^3x on the unit disc."""
    _require_same_mass(s1, s2)
    points, weights = ball_quadrature(disc_grid or default_disc_grid())
    t = np.ones(points.shape[0])
    phi1, phi2 = solution_values(s1, t, points), solution_values(s2, t, points)
    dphi1, dphi2 = solution_dt(s1, t, points), solution_dt(s2, t, points)
    return float(weights @ (phi2 * dphi1 - phi1 * dphi2))


def one_particle_product(s1: KGSolution, s2: KGSolution) -> complex:
    """<a1, a2> = int conj(a1) a2 d^3k = mu - (i/2) sigma."""
    _require_same_mass(s1, s2)
    if s1.modes.grid != s2.modes.grid:
        raise GridError("Solutions live on different momentum grids")
    _, weights = ball_quadrature(s1.modes.grid)
    return complex(np.sum(weights * np.conj(s1.modes.values) * s2.modes.values))


def mu_vacuum(s1: KGSolution, s2: KGSolution) -> float:
    """Vacuum one-particle quadratic form Re <a1, a2>."""
    return one_particle_product(s1, s2).real


def propagator_batch(m: float, tc: complex, x, q_t, q_x) -> np.ndarray:
    """
    Regularized causal propagator between (tc, x) and many points q; eps = -Im(tc).

    m > 0: (i m / 4 pi^2) [K1(m sqrt(s+))/sqrt(s+) - K1(m sqrt(s-))/sqrt(s-)]
    m = 0: (i / 4 pi^2) [1/s+ - 1/s-],  s+- = sigma(Re tc +- i eps, x; q)
    """
    tc = complex(tc)
    eps = -tc.imag
    if eps == 0.0:
        raise UnregularizedError("The propagator needs a complex time with nonzero imaginary part")
    sigma_plus = sigma_batch(tc.real + 1j * eps, x, q_t, q_x)
    sigma_minus = sigma_batch(tc.real - 1j * eps, x, q_t, q_x)
    if m == 0.0:
        return (1j / (4.0 * np.pi ** 2)) * (1.0 / sigma_plus - 1.0 / sigma_minus)
    root_plus = np.sqrt(sigma_plus)
    root_minus = np.sqrt(sigma_minus)
    return (1j * m / (4.0 * np.pi ** 2)) * (
        special.kv(1, m * root_plus) / root_plus - special.kv(1, m * root_minus) / root_minus
    )


def propagator_complex(m: float, tc: complex, x, q: SpacetimePoint) -> complex:
    value = propagator_batch(m, tc, x, np.array([q.t]), q.x_array[None, :])
    return complex(value[0])
