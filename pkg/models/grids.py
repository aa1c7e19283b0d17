"""
Pydantic models for quadrature rules, grid specifications and regularization schedules.
Array-valued models store read-only numpy arrays.
"""

from typing import Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def frozen_array(value, dtype=float) -> np.ndarray:
    """Copy into a read-only numpy array."""
    arr = np.array(value, dtype=dtype)
    arr.setflags(write=False)
    return arr


class ArrayModel(BaseModel):
    """Base for immutable models carrying numpy arrays."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class Quadrature1D(ArrayModel):
    """Gauss-Legendre rule on an interval [a, b]."""

    nodes: np.ndarray = Field(description="Quadrature nodes in (a, b)")
    weights: np.ndarray = Field(description="Positive quadrature weights")
    a: float = Field(description="Left end of the interval")
    b: float = Field(description="Right end of the interval")

    @field_validator('nodes', 'weights', mode='before')
    @classmethod
    def validate_arrays(cls, v):
        return frozen_array(v)

    @model_validator(mode='after')
    def validate_rule(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError('nodes and weights must be 1-D arrays of equal length')
        if not self.b > self.a:
            raise ValueError('interval must satisfy a < b')
        return self

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def integrate(self, values, axis: int = -1):
        """Apply the rule along one axis of an array of samples."""
        return np.tensordot(np.asarray(values), self.weights, axes=([axis], [0]))


class SphereGrid(ArrayModel):
    """Product grid on the unit sphere: Gauss in cos(theta), trapezoid in phi."""

    directions: np.ndarray = Field(description="Unit vectors, shape (N, 3)")
    weights: np.ndarray = Field(description="Solid-angle weights summing to 4*pi")
    n_theta: int = Field(ge=1)
    n_phi: int = Field(ge=2)

    @field_validator('directions', 'weights', mode='before')
    @classmethod
    def validate_arrays(cls, v):
        return frozen_array(v)

    @model_validator(mode='after')
    def validate_grid(self):
        if self.directions.ndim != 2 or self.directions.shape[1] != 3:
            raise ValueError('directions must have shape (N, 3)')
        if self.directions.shape[0] != self.weights.size:
            raise ValueError('one weight per direction is required')
        norms = np.linalg.norm(self.directions, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ValueError('directions must be unit vectors')
        return self

    @property
    def size(self) -> int:
        return int(self.weights.size)

    @property
    def exact_degree(self) -> int:
        """Highest spherical-harmonic degree integrated exactly."""
        return min(2 * self.n_theta - 1, self.n_phi - 1)


class BallGrid(BaseModel):
    """Radial Gauss nodes on [0, radius] times a sphere grid; used for momentum space and the Cauchy disc."""

    model_config = ConfigDict(frozen=True)

    radius: float = Field(gt=0.0, description="Outer radius (k_max in momentum space)")
    n_radial: int = Field(ge=1, description="Radial Gauss-Legendre nodes")
    n_theta: int = Field(ge=1, description="Polar Gauss nodes")
    n_phi: int = Field(ge=2, description="Azimuthal trapezoid nodes")

    @property
    def size(self) -> int:
        return self.n_radial * self.n_theta * self.n_phi


class ConeGrid(BaseModel):
    """Product grid (omega, u) on the null cone V, u in [0, 1]."""

    model_config = ConfigDict(frozen=True)

    n_u: int = Field(ge=2, description="Gauss-Legendre nodes in u")
    n_theta: int = Field(ge=1, description="Polar Gauss nodes")
    n_phi: int = Field(ge=2, description="Azimuthal trapezoid nodes")

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_theta * self.n_phi, self.n_u)

    @property
    def spacing(self) -> float:
        """Typical node spacing in u."""
        return 1.0 / self.n_u


class EllGrid(BaseModel):
    """Uniform periodic grid on [-half_width, half_width) in l = log(u/(1-u))."""

    model_config = ConfigDict(frozen=True)

    half_width: float = Field(gt=0.0)
    n: int = Field(ge=16)

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / self.n

    def points(self) -> np.ndarray:
        return -self.half_width + self.step * np.arange(self.n)


class EpsSchedule(BaseModel):
    """Strictly decreasing regularization parameters with an extrapolation order."""

    model_config = ConfigDict(frozen=True)

    eps_values: Tuple[float, ...] = Field(description="Decreasing positive eps samples")
    extrapolation_order: int = Field(default=2, ge=0, le=6)

    @field_validator('eps_values')
    @classmethod
    def validate_eps(cls, v):
        """All positive, strictly decreasing."""
        arr = np.asarray(v, dtype=float)
        if arr.size == 0 or np.any(arr <= 0.0):
            raise ValueError('eps values must be positive')
        if np.any(np.diff(arr) >= 0.0):
            raise ValueError('eps values must be strictly decreasing')
        return tuple(float(e) for e in arr)

    @classmethod
    def geometric(cls, eps0: float, ratio: float = 0.5, count: int = 6, order: int = 2) -> 'EpsSchedule':
        """eps_n = eps0 * ratio**n for n < count."""
        if not 0.0 < ratio < 1.0:
            raise ValueError('ratio must lie in (0, 1)')
        return cls(eps_values=tuple(eps0 * ratio ** n for n in range(count)), extrapolation_order=order)


class ExtrapolationResult(BaseModel):
    """An eps -> 0+ limit with its error estimate."""

    model_config = ConfigDict(frozen=True)

    limit: complex
    error_estimate: float = Field(ge=0.0)
    n_samples: int


class FourierSpectrum(ArrayModel):
    """Continuum-normalized spectrum (2 pi)^(-1/2) * integral exp(ikx) f(x) dx on an FFT frequency axis."""

    k: np.ndarray = Field(description="Increasing frequency axis")
    values: np.ndarray = Field(description="Spectrum, last axis along k")

    @field_validator('k', mode='before')
    @classmethod
    def validate_k(cls, v):
        return frozen_array(v)

    @field_validator('values', mode='before')
    @classmethod
    def validate_values(cls, v):
        return frozen_array(v, dtype=complex)

    @property
    def dk(self) -> float:
        return float(self.k[1] - self.k[0])
