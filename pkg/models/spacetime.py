"""
Pydantic models for events and coordinates in the unit double cone frame.
The frame has its lower tip at the origin and its upper tip at t = 2.
"""

from typing import Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class SpacetimePoint(BaseModel):
    """An event (t, x) in Minkowski space, frame adapted to the unit double cone."""

    model_config = ConfigDict(frozen=True)

    t: float = Field(description="Time coordinate")
    x: Tuple[float, float, float] = Field(
        default=(0.0, 0.0, 0.0),
        description="Spatial coordinates"
    )

    @field_validator('t')
    @classmethod
    def validate_time(cls, v):
        """Reject non-finite times."""
        if not np.isfinite(v):
            raise ValueError('Time coordinate must be finite')
        return float(v)

    @field_validator('x', mode='before')
    @classmethod
    def validate_space(cls, v):
        """Accept any length-3 sequence of finite numbers."""
        arr = np.asarray(v, dtype=float).reshape(-1)
        if arr.size != 3 or not np.all(np.isfinite(arr)):
            raise ValueError('Spatial coordinates must be three finite numbers')
        return tuple(float(c) for c in arr)

    @property
    def x_array(self) -> np.ndarray:
        return np.asarray(self.x, dtype=float)

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.x_array))

    @classmethod
    def at(cls, t: float, x=(0.0, 0.0, 0.0)) -> 'SpacetimePoint':
        """Shorthand constructor."""
        return cls(t=t, x=x)

    @classmethod
    def on_cone(cls, u: float, omega) -> 'SpacetimePoint':
        """The point (u, u*omega) on the lower null cone V."""
        return cls(t=u, x=u * np.asarray(omega, dtype=float))


class LightconeCoord(BaseModel):
    """Light-cone coordinates u = (t+r)/2, v = (t-r)/2 and direction omega."""

    model_config = ConfigDict(frozen=True)

    u: float = Field(ge=0.0, description="Advanced null coordinate")
    v: float = Field(description="Retarded null coordinate")
    omega: Tuple[float, float, float] = Field(description="Unit spatial direction")

    @field_validator('omega', mode='before')
    @classmethod
    def validate_direction(cls, v):
        """Direction must be a unit vector."""
        arr = np.asarray(v, dtype=float).reshape(-1)
        if arr.size != 3 or abs(np.linalg.norm(arr) - 1.0) > 1e-12:
            raise ValueError('omega must be a unit 3-vector')
        return tuple(float(c) for c in arr)

    @model_validator(mode='after')
    def validate_ordering(self):
        """u - v is the spatial radius and cannot be negative."""
        if self.u - self.v < 0.0:
            raise ValueError('u - v must be non-negative')
        return self


class KillingSample(BaseModel):
    """The conformal Killing field X and its divergence at one event."""

    model_config = ConfigDict(frozen=True)

    vector: Tuple[float, float, float, float] = Field(
        description="Components (X^t, X^x, X^y, X^z)"
    )
    divergence: float = Field(description="Divergence of X, equal to 4(t-1)")

    @property
    def vector_array(self) -> np.ndarray:
        return np.asarray(self.vector, dtype=float)
