"""
Pydantic models for reconstruction, modular flow and generator computations.
"""

import math
from typing import Callable, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .grids import ConeGrid, EpsSchedule
from .spacetime import SpacetimePoint


class GoursatSpec(BaseModel):
    """Parameters of the regularized characteristic reconstruction."""

    model_config = ConfigDict(frozen=True)

    mass: float = Field(ge=0.0, description="Klein-Gordon mass used by the propagator")
    sched: EpsSchedule = Field(description="eps values for t -> t - i eps")
    cone_grid: ConeGrid = Field(description="Grid of the boundary data to consume")
    window: float = Field(default=0.05, gt=0.0, description="Half-width of the sinh-clustered window around the pole")
    n_window: int = Field(default=64, ge=4)
    n_side: int = Field(default=48, ge=2)


class FlowParams(BaseModel):
    """Modular flow parameter and mass."""

    model_config = ConfigDict(frozen=True)

    tau: float = Field(description="Geometric flow parameter")
    mass: float = Field(default=0.0, ge=0.0)

    @classmethod
    def from_modular(cls, modular_tau: float, mass: float = 0.0) -> 'FlowParams':
        """Convert a modular-group parameter to the geometric one (modular tau = -tau / 2 pi)."""
        return cls(tau=-2.0 * math.pi * modular_tau, mass=mass)


class FmKernel(BaseModel):
    """Series truncation parameters for the entire kernel F_m."""

    model_config = ConfigDict(frozen=True)

    mass: float = Field(gt=0.0)
    truncation_terms: int = Field(default=60, ge=2, le=200, description="Hard cap on series terms")
    rel_tol: float = Field(default=1e-16, gt=0.0)


class SymbolSample(BaseModel):
    """One value b(x, k) of the generator-difference amplitude."""

    model_config = ConfigDict(frozen=True)

    x: SpacetimePoint
    k: Tuple[float, float, float, float]
    value: complex

    @field_validator('value')
    @classmethod
    def validate_value(cls, v):
        if v != v or abs(v) == float('inf'):
            raise ValueError('Symbol value must be finite')
        return v


class SymbolFit(BaseModel):
    """Fitted log-log decay exponent of a symbol derivative."""

    alpha: int = Field(ge=0, description="Order of x-derivatives")
    beta: int = Field(ge=0, description="Order of k-derivatives")
    slope: float
    residual: float = Field(ge=0.0)
    expected: float = Field(description="Exponent attained along null covectors, -1 + alpha")
    class_exponent: float = Field(description="Nominal S^{-1}_{1,1} exponent, -1 + alpha - beta")
    k_norms: Tuple[float, ...] = ()
    magnitudes: Tuple[float, ...] = ()


class KMSComparison(BaseModel):
    """Strip-boundary values of the flowed two-point function against both swapped conventions."""

    taus: Tuple[float, ...]
    upper_boundary: Tuple[complex, ...] = Field(description="F(tau + 2 pi i)")
    reversed_swap: Tuple[complex, ...] = Field(description="<K Phi2, V(-tau) K Phi1>")
    forward_swap: Tuple[complex, ...] = Field(description="<K Phi2, V(tau) K Phi1>")
    reversed_residual: float
    forward_residual: float
    matching_convention: Optional[str] = Field(description="'reversed', 'forward' or None")


class SochockijProfile(BaseModel):
    """A 1-D test family for eps-regularizer independence: integral of g / (f + i eps h)^2."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str
    f: Callable = Field(description="Smooth function with a simple zero at root")
    h: Callable = Field(description="Positive regularizer weight")
    g: Callable = Field(description="Rapidly decaying test function")
    interval: Tuple[float, float]
    root: float = Field(description="The zero of f inside the interval")
