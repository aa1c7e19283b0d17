"""
Pydantic models for Klein-Gordon solutions in the double cone.
A solution is carried by its momentum amplitudes; field values are derived.
"""

import numpy as np
from pydantic import Field, field_validator, model_validator

from .grids import ArrayModel, BallGrid, frozen_array


class CauchyData(ArrayModel):
    """Real Cauchy data (phi, d_t phi) on the t = 1 disc of the double cone."""

    grid: BallGrid = Field(description="Radial x angular grid of the disc (radius 1)")
    f: np.ndarray = Field(description="Field values phi(1, x) at the grid points")
    g: np.ndarray = Field(description="Time derivative d_t phi(1, x) at the grid points")
    support_radius: float = Field(gt=0.0, lt=1.0, description="Both fields vanish beyond this radius")

    @field_validator('f', 'g', mode='before')
    @classmethod
    def validate_fields(cls, v):
        arr = frozen_array(v)
        if not np.all(np.isfinite(arr)):
            raise ValueError('Cauchy data must be finite')
        return arr

    @model_validator(mode='after')
    def validate_shapes(self):
        if self.f.shape != (self.grid.size,) or self.g.shape != (self.grid.size,):
            raise ValueError('Cauchy data must have one sample per disc grid point')
        return self


class ModeAmplitude(ArrayModel):
    """Complex amplitudes a(k) on a momentum grid, the one-particle representative of a solution."""

    mass: float = Field(ge=0.0, description="Klein-Gordon mass")
    grid: BallGrid = Field(description="Momentum grid; grid.radius is k_max")
    values: np.ndarray = Field(description="Amplitudes a(k) at the grid points")

    @field_validator('values', mode='before')
    @classmethod
    def validate_values(cls, v):
        arr = frozen_array(v, dtype=complex)
        if not np.all(np.isfinite(arr)):
            raise ValueError('Mode amplitudes must be finite')
        return arr

    @model_validator(mode='after')
    def validate_shape(self):
        if self.values.shape != (self.grid.size,):
            raise ValueError('One amplitude per momentum grid point is required')
        return self

    @property
    def k_max(self) -> float:
        return self.grid.radius

    def scaled(self, factor: float) -> 'ModeAmplitude':
        return self.model_copy(update={'values': frozen_array(factor * self.values, dtype=complex)})


class KGSolution(ArrayModel):
    """A Klein-Gordon solution given by a plane-wave superposition."""

    modes: ModeAmplitude

    @property
    def mass(self) -> float:
        return self.modes.mass

    def __add__(self, other: 'KGSolution') -> 'KGSolution':
        if self.modes.grid != other.modes.grid or self.mass != other.mass:
            raise ValueError('Solutions must share mass and momentum grid')
        values = self.modes.values + other.modes.values
        return KGSolution(modes=self.modes.model_copy(update={'values': frozen_array(values, dtype=complex)}))

    def scaled(self, factor: float) -> 'KGSolution':
        return KGSolution(modes=self.modes.scaled(factor))
