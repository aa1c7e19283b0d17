"""
Shared numerical machinery: quadrature rules, Legendre spectral tools on Gauss grids,
pole-clustered rules, continuum-normalized FFTs, complex Bessel K1 and eps -> 0+ extrapolation.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Callable, Iterable, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy import special

from config.settings import settings
from models.grids import (
    BallGrid, ConeGrid, EpsSchedule, ExtrapolationResult, FourierSpectrum, Quadrature1D, SphereGrid,
)
from physics.errors import BranchCutError, DomainError, ExtrapolationError, FitError, GridError

logger = logging.getLogger(__name__)

SQRT_2PI = np.sqrt(2.0 * np.pi)


@lru_cache(maxsize=256)
def gauss_legendre(n: int, a: float = 0.0, b: float = 1.0) -> Quadrature1D:
    """Gauss-Legendre nodes and weights mapped to [a, b]; exact up to degree 2n-1."""
    if n < 1:
        raise GridError(f"Gauss-Legendre rule needs n >= 1 [n={n}]")
    if not b > a:
        raise GridError(f"Invalid interval [a={a}, b={b}]")
    x, w = npleg.leggauss(n)
    half = 0.5 * (b - a)
    return Quadrature1D(nodes=0.5 * (a + b) + half * x, weights=half * w, a=a, b=b)


@lru_cache(maxsize=64)
def sphere_grid(n_theta: int, n_phi: int) -> SphereGrid:
    """Product rule: Gauss-Legendre in cos(theta) times the uniform trapezoid in phi."""
    if n_theta < 1 or n_phi < 2:
        raise GridError(f"Sphere grid needs n_theta >= 1 and n_phi >= 2 [n_theta={n_theta}, n_phi={n_phi}]")
    cos_t, w_t = npleg.leggauss(n_theta)
    sin_t = np.sqrt(1.0 - cos_t ** 2)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    directions = np.stack(
        [
            np.outer(sin_t, np.cos(phi)).ravel(),
            np.outer(sin_t, np.sin(phi)).ravel(),
            np.repeat(cos_t, n_phi),
        ],
        axis=1,
    )
    weights = np.repeat(w_t, n_phi) * (2.0 * np.pi / n_phi)
    return SphereGrid(directions=directions, weights=weights, n_theta=n_theta, n_phi=n_phi)


@lru_cache(maxsize=32)
def ball_quadrature(grid: BallGrid) -> Tuple[np.ndarray, np.ndarray]:
    """Points (N, 3) and volume weights of a radial x angular ball grid, radial index outermost."""
    radial = gauss_legendre(grid.n_radial, 0.0, grid.radius)
    sphere = sphere_grid(grid.n_theta, grid.n_phi)
    points = (radial.nodes[:, None, None] * sphere.directions[None, :, :]).reshape(-1, 3)
    weights = (radial.weights[:, None] * radial.nodes[:, None] ** 2 * sphere.weights[None, :]).ravel()
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


def cone_quadratures(grid: ConeGrid) -> Tuple[SphereGrid, Quadrature1D]:
    """Angular and u-rules of a cone grid."""
    return sphere_grid(grid.n_theta, grid.n_phi), gauss_legendre(grid.n_u, 0.0, 1.0)


# Legendre spectral tools on Gauss grids

@lru_cache(maxsize=32)
def _analysis_matrix(n: int) -> np.ndarray:
    """Maps values at n Gauss nodes to the coefficients of the interpolating Legendre series."""
    x, w = npleg.leggauss(n)
    vander = npleg.legvander(x, n - 1)
    scale = (2.0 * np.arange(n) + 1.0) / 2.0
    return (vander * w[:, None]).T * scale[:, None]


@lru_cache(maxsize=32)
def _reference_differentiation(n: int) -> np.ndarray:
    x, _ = npleg.leggauss(n)
    derivative_coeffs = npleg.legder(np.eye(n), axis=0)
    return npleg.legvander(x, n - 2) @ derivative_coeffs @ _analysis_matrix(n)


def _reference_coordinate(quad: Quadrature1D, x) -> np.ndarray:
    return (2.0 * np.asarray(x, dtype=float) - (quad.a + quad.b)) / (quad.b - quad.a)


def legendre_coefficients(quad: Quadrature1D, values) -> np.ndarray:
    """Legendre coefficients of the interpolant through samples on the rule's nodes (last axis)."""
    values = np.asarray(values)
    if values.shape[-1] != quad.size:
        raise GridError(f"Samples do not match the rule [samples={values.shape[-1]}, nodes={quad.size}]")
    return values @ _analysis_matrix(quad.size).T


def legendre_evaluate(quad: Quadrature1D, coeffs, x) -> np.ndarray:
    """Evaluate Legendre series row-wise; x broadcasts against coeffs.shape[:-1] + (m,)."""
    coeffs = np.asarray(coeffs)
    stacked = np.moveaxis(coeffs, -1, 0)[..., np.newaxis]
    return npleg.legval(_reference_coordinate(quad, x), stacked, tensor=False)


def legendre_vandermonde(quad: Quadrature1D, x, degree: int = None) -> np.ndarray:
    """Legendre polynomials at arbitrary points, shape x.shape + (degree + 1,)."""
    degree = quad.size - 1 if degree is None else degree
    return npleg.legvander(_reference_coordinate(quad, x), degree)


def legendre_derivative(quad: Quadrature1D, coeffs) -> np.ndarray:
    """Coefficients of the derivative series with respect to the physical coordinate."""
    return npleg.legder(np.asarray(coeffs), axis=-1) * (2.0 / (quad.b - quad.a))


def differentiate_on_nodes(quad: Quadrature1D, values) -> np.ndarray:
    """Spectral derivative of node samples along the last axis."""
    matrix = _reference_differentiation(quad.size) * (2.0 / (quad.b - quad.a))
    return np.asarray(values) @ matrix.T


def clustered_rule(
    center,
    width,
    a: float,
    b: float,
    window: float,
    n_window: int,
    n_side: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Quadrature on [a, b] for integrands with a near-singularity at center + i*width.

    Gauss rules cover [a, c - window] and [c + window, b]; the window itself is mapped
    by u = c + width*sinh(y) so that nodes concentrate on the scale of width.
    center and width broadcast; the result has shape center.shape + (n_window + 2*n_side,).
    """
    center = np.clip(np.asarray(center, dtype=float), a, b)
    width = np.broadcast_to(np.asarray(width, dtype=float), center.shape)
    if np.any(width <= 0.0):
        raise GridError("Clustered rule needs a positive width")
    lo = np.maximum(a, center - window)
    hi = np.minimum(b, center + window)
    x_side, w_side = npleg.leggauss(n_side)
    x_win, w_win = npleg.leggauss(n_window)

    def mapped(p, q, x, w):
        mid = 0.5 * (p + q)[..., None]
        half = 0.5 * (q - p)[..., None]
        return mid + half * x, half * w

    left_nodes, left_weights = mapped(np.full_like(lo, a), lo, x_side, w_side)
    right_nodes, right_weights = mapped(hi, np.full_like(hi, b), x_side, w_side)
    y, w_y = mapped(np.arcsinh((lo - center) / width), np.arcsinh((hi - center) / width), x_win, w_win)
    win_nodes = center[..., None] + width[..., None] * np.sinh(y)
    win_weights = w_y * width[..., None] * np.cosh(y)

    nodes = np.concatenate([left_nodes, win_nodes, right_nodes], axis=-1)
    weights = np.concatenate([left_weights, win_weights, right_weights], axis=-1)
    return nodes, weights


def fourier_interval(x, samples, padding: int = 0) -> FourierSpectrum:
    """
    Continuum Fourier transform (2 pi)^(-1/2) * integral exp(ikx) f(x) dx of uniform samples.

    The last axis of samples runs along x; the function is zero-extended by `padding` points.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise GridError("Fourier transform needs a 1-D grid with at least two points")
    dx = x[1] - x[0]
    if dx <= 0.0 or not np.allclose(np.diff(x), dx, rtol=1e-9, atol=0.0):
        raise GridError("Fourier transform needs a uniform increasing grid")
    samples = np.asarray(samples)
    if samples.shape[-1] != x.size:
        raise GridError(f"Samples do not match the grid [samples={samples.shape[-1]}, grid={x.size}]")

    n = x.size + int(padding)
    padded = np.zeros(samples.shape[:-1] + (n,), dtype=complex)
    padded[..., :x.size] = samples
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)
    spectrum = n * np.fft.ifft(padded, axis=-1) * np.exp(1j * k * x[0]) * (dx / SQRT_2PI)
    return FourierSpectrum(k=np.fft.fftshift(k), values=np.fft.fftshift(spectrum, axes=-1))


def bessel_K1_complex(z):
    """Modified Bessel function K1 with the principal branch, cut along the negative real axis."""
    z = np.asarray(z, dtype=complex)
    if np.any((z.imag == 0.0) & (z.real <= 0.0)):
        raise BranchCutError("K1 evaluated on its branch cut (-inf, 0]")
    values = special.kv(1, z)
    return complex(values) if values.ndim == 0 else values


def default_schedule(spacing: float) -> EpsSchedule:
    """Geometric schedule starting at a fixed fraction of the grid spacing."""
    return EpsSchedule.geometric(
        eps0=settings.EPS_SPACING_FACTOR * spacing,
        ratio=settings.EPS_RATIO,
        count=settings.EPS_COUNT,
        order=settings.EXTRAPOLATION_ORDER,
    )


def _extrapolation_basis(s: np.ndarray, order: int, log_terms: bool) -> np.ndarray:
    """Columns 1, s, then s^j log(s) (with log_terms) followed by s^j for 2 <= j <= order."""
    columns = [s ** j for j in range(min(order, 1) + 1)]
    for j in range(2, order + 1):
        if log_terms:
            columns.append(s ** j * np.log(s))
        columns.append(s ** j)
    return np.stack(columns, axis=1)


def eps_extrapolate(
    samples: Iterable[Tuple[float, complex]],
    order: int = 2,
    log_terms: bool = False,
) -> ExtrapolationResult:
    """
    Richardson extrapolation of v(eps) to eps -> 0+ with the model sum_j c_j eps^j (j <= order),
    optionally augmented by eps^j log(eps) for 2 <= j <= order.

    The k-th extrapolant fits the k largest eps with as many leading model terms as it can
    determine; the limit is the last extrapolant and the error estimate its difference to the
    one before.
    """
    pairs = sorted(((float(e), complex(v)) for e, v in samples), key=lambda pair: -pair[0])
    eps = np.array([pair[0] for pair in pairs])
    values = np.array([pair[1] for pair in pairs])
    if eps.size < 3:
        raise ExtrapolationError(f"Insufficient samples for extrapolation [samples={eps.size}, required=3]")
    if np.any(eps <= 0.0) or np.unique(eps).size != eps.size:
        raise ExtrapolationError("eps samples must be distinct and positive")

    basis = _extrapolation_basis(eps / eps[0], order, log_terms)
    if eps.size < basis.shape[1]:
        raise ExtrapolationError(
            f"Insufficient samples for the model [samples={eps.size}, terms={basis.shape[1]}]"
        )

    def extrapolant(count: int) -> complex:
        columns = min(count, basis.shape[1])
        coeffs, *_ = np.linalg.lstsq(basis[:count, :columns], values[:count], rcond=None)
        return complex(coeffs[0])

    limit = extrapolant(eps.size)
    error = abs(limit - extrapolant(eps.size - 1))
    return ExtrapolationResult(limit=limit, error_estimate=float(error), n_samples=int(eps.size))


def loglog_slope(x: Sequence[float], y: Sequence[float], max_residual: float = None) -> Tuple[float, float]:
    """Least-squares slope of log y against log x and the rms residual of the fit."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or x.shape != y.shape:
        raise FitError(f"Log-log fit needs at least two paired samples [x={x.shape}, y={y.shape}]")
    valid = np.isfinite(x) & np.isfinite(y)
    valid[valid] &= (x[valid] > 0.0) & (y[valid] > 0.0)
    if not np.all(valid):
        raise DomainError(f"Log-log fit needs finite positive samples [rejected={int(np.sum(~valid))} of {x.size}]")
    log_x = np.log(x)
    log_y = np.log(y)
    slope, intercept = np.polyfit(log_x, log_y, 1)
    residual = float(np.sqrt(np.mean((log_y - (slope * log_x + intercept)) ** 2)))
    if max_residual is not None and residual > max_residual:
        raise FitError(f"Log-log fit unstable [slope={slope:.3f}, residual={residual:.3e}]")
    return float(slope), residual


def parallel_map(fn: Callable, items: Iterable, max_workers: int = None) -> List:
    """Map over items with a bounded thread pool; numpy kernels release the GIL."""
    items = list(items)
    workers = settings.MAX_WORKERS if max_workers is None else max_workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
