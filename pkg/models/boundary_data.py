"""
Pydantic models for characteristic data on the null cone V and its spectral representations.
"""

import numpy as np
from pydantic import Field, field_validator, model_validator

from .grids import ArrayModel, ConeGrid, Quadrature1D, frozen_array


class BoundaryData(ArrayModel):
    """Real samples of Phi(omega, u) = u * phi(u, u omega) on a cone grid."""

    grid: ConeGrid = Field(description="Product grid (directions, u-nodes)")
    values: np.ndarray = Field(description="Phi at the grid, shape (n_directions, n_u)")
    support_cap: float = Field(
        ge=0.0,
        lt=1.0,
        description="Phi is negligible for u >= support_cap"
    )

    @field_validator('values', mode='before')
    @classmethod
    def validate_values(cls, v):
        arr = np.asarray(v)
        if np.iscomplexobj(arr):
            raise ValueError('Boundary data must be real')
        arr = frozen_array(arr)
        if not np.all(np.isfinite(arr)):
            raise ValueError('Boundary data must be finite')
        return arr

    @model_validator(mode='after')
    def validate_shape(self):
        if self.values.shape != self.grid.shape:
            raise ValueError(f'values must have shape {self.grid.shape}, got {self.values.shape}')
        return self

    def __add__(self, other: 'BoundaryData') -> 'BoundaryData':
        if self.grid != other.grid:
            raise ValueError('Boundary data live on different grids')
        return BoundaryData(
            grid=self.grid,
            values=self.values + other.values,
            support_cap=max(self.support_cap, other.support_cap),
        )

    def scaled(self, factor: float) -> 'BoundaryData':
        return BoundaryData(grid=self.grid, values=factor * self.values, support_cap=self.support_cap)


class BoundarySpectrum(ArrayModel):
    """Half-line spectrum Phi^(omega, k), k > 0, of zero-extended boundary data."""

    grid: ConeGrid
    k_rule: Quadrature1D = Field(description="Gauss rule on [0, k_max]")
    values: np.ndarray = Field(description="Spectrum, shape (n_directions, n_k)")
    edge_derivatives: np.ndarray = Field(
        description="First three u-derivatives of Phi at the tip u = 0, shape (n_directions, 3); they fix the large-k tail"
    )

    @field_validator('values', mode='before')
    @classmethod
    def validate_values(cls, v):
        return frozen_array(v, dtype=complex)

    @field_validator('edge_derivatives', mode='before')
    @classmethod
    def validate_edge(cls, v):
        return frozen_array(v)


class HSpectrum(ArrayModel):
    """Spectrum Phi~(omega, h) of boundary data in the coordinate l, u = 1/(1+exp(-l))."""

    grid: ConeGrid
    h: np.ndarray = Field(description="FFT frequency axis, increasing")
    values: np.ndarray = Field(description="Spectrum, shape (n_directions, n_h)")

    @field_validator('h', mode='before')
    @classmethod
    def validate_h(cls, v):
        return frozen_array(v)

    @field_validator('values', mode='before')
    @classmethod
    def validate_values(cls, v):
        return frozen_array(v, dtype=complex)

    @property
    def dh(self) -> float:
        return float(self.h[1] - self.h[0])

    def with_values(self, values) -> 'HSpectrum':
        return HSpectrum(grid=self.grid, h=self.h, values=values)
