"""
Synthetic field data for the verification suites.
Uses a JSON catalog of named regression cases plus seeded random families.
"""

import json
import logging
import os
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config.settings import settings
from models.boundary_data import BoundaryData
from models.fields import CauchyData, KGSolution
from models.flow import SochockijProfile
from models.grids import BallGrid, ConeGrid
from models.spacetime import SpacetimePoint
from physics.bulk import make_bump_cauchy, solution_from_cauchy
from physics.numerics import cone_quadratures

# Configure logging
logger = logging.getLogger(__name__)


def make_rng(seed: int) -> np.random.Generator:
    """Seeded PCG64 generator; streams are identical across platforms for a given seed."""
    return np.random.Generator(np.random.PCG64(seed))


def boundary_profile(
    grid: ConeGrid,
    amplitude: float = 1.0,
    cap: float = 0.7,
    tilt: float = 0.0,
    axis=(0.0, 0.0, 1.0),
    wavenumber: float = 4.0,
    phase: float = 0.0,
) -> BoundaryData:
    """
    Compactly supported boundary data
        Phi(w, u) = A u (1 - u/cap)^8 (1 + tilt u w.axis) cos(wavenumber u + phase),  u < cap.
    """
    if not 0.0 < cap < 1.0:
        raise ValueError(f"Profile cap must lie in (0, 1), got {cap}")
    sphere, quad = cone_quadratures(grid)
    u = quad.nodes
    envelope = np.where(u < cap, u * np.clip(1.0 - u / cap, 0.0, None) ** 8, 0.0)
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    angular = 1.0 + tilt * np.outer(sphere.directions @ axis, u)
    values = amplitude * envelope[None, :] * angular * np.cos(wavenumber * u + phase)[None, :]
    return BoundaryData(grid=grid, values=values, support_cap=cap)


def sochockij_families() -> List[SochockijProfile]:
    """Three test families with different regularizer weights h."""
    gaussian = lambda x: np.exp(-np.asarray(x) ** 2)
    shifted = lambda x: np.exp(-(np.asarray(x) - 0.3) ** 2) * (1.0 + 0.5 * np.asarray(x))
    return [
        SochockijProfile(
            name="linear",
            f=lambda x: np.asarray(x, dtype=float),
            h=lambda x: 2.0 + np.sin(x),
            g=gaussian,
            interval=(-6.0, 6.0),
            root=0.0,
        ),
        SochockijProfile(
            name="sinh",
            f=lambda x: np.sinh((np.asarray(x) - 0.3) / 2.0),
            h=lambda x: np.cosh(np.asarray(x) / 2.0) * np.cosh(0.15),
            g=shifted,
            interval=(-6.0, 6.0),
            root=0.3,
        ),
        SochockijProfile(
            name="cubic",
            f=lambda x: np.asarray(x) * (1.0 + np.asarray(x) ** 2 / 4.0),
            h=lambda x: np.exp(np.asarray(x) / 3.0),
            g=gaussian,
            interval=(-6.0, 6.0),
            root=0.0,
        ),
    ]


class SyntheticFieldGenerator:
    """
    Provides named regression cases and seeded random families of Cauchy and boundary data.
    """

    def __init__(self, data_file: str = "regression_cases.json", seed: Optional[int] = None):
        """Initialize with path to the regression case catalog."""
        current_dir = os.path.dirname(os.path.abspath(__file__))
        self.data_file = os.path.join(current_dir, data_file)
        self.seed = settings.DEFAULT_SEED if seed is None else seed
        self._load_data()

    def _load_data(self):
        """Load regression cases from JSON file."""
        try:
            with open(self.data_file, 'r') as f:
                raw_data = json.load(f)
        except FileNotFoundError:
            raise FileNotFoundError(f"Regression case catalog not found at {self.data_file}")
        except json.JSONDecodeError:
            raise ValueError(f"Invalid JSON in regression case catalog: {self.data_file}")

        self.cases = {case['case_id']: case for case in raw_data.get('regression_cases', [])}
        self.profiles = {p['profile_id']: p for p in raw_data.get('boundary_profiles', [])}

    def get_case(self, case_id: str) -> Optional[Dict[str, Any]]:
        return self.cases.get(case_id)

    def list_cases(self) -> List[str]:
        return list(self.cases.keys())

    def cauchy_data(self, case_id: str, grid: Optional[BallGrid] = None) -> CauchyData:
        """Cauchy data of a named regression case."""
        case = self.get_case(case_id)
        if case is None:
            raise KeyError(f"Unknown regression case {case_id!r}")
        return make_bump_cauchy(
            center=case['center'],
            radius=case['radius'],
            amplitude_f=case['amplitude_f'],
            amplitude_g=case['amplitude_g'],
            grid=grid,
            profile=case.get('profile', 'bump'),
            shape=case.get('shape', 10.0),
        )

    def solution(self, case_id: str, mass: float, kgrid: Optional[BallGrid] = None,
                 disc_grid: Optional[BallGrid] = None) -> KGSolution:
        return solution_from_cauchy(self.cauchy_data(case_id, disc_grid), mass, kgrid)

    def named_profile(self, profile_id: str, grid: ConeGrid) -> BoundaryData:
        params = dict(self.profiles[profile_id])
        params.pop('profile_id')
        params.pop('description', None)
        return boundary_profile(grid, **params)

    def random_cauchy(self, rng: np.random.Generator, grid: Optional[BallGrid] = None) -> CauchyData:
        """Kaiser bump with random center (|c| <= 0.05), radius in [0.8, 0.9] and amplitudes in [-1, 1]."""
        direction = rng.normal(size=3)
        center = 0.05 * rng.uniform() * direction / np.linalg.norm(direction)
        return make_bump_cauchy(
            center=center,
            radius=rng.uniform(0.8, 0.9),
            amplitude_f=rng.uniform(-1.0, 1.0),
            amplitude_g=rng.uniform(-1.0, 1.0),
            grid=grid,
            profile="kaiser",
            shape=10.0,
        )

    def random_cauchy_pairs(self, n_pairs: int, grid: Optional[BallGrid] = None,
                            stream: int = 0) -> List[Tuple[CauchyData, CauchyData]]:
        rng = make_rng(self.seed + stream)
        pairs = [(self.random_cauchy(rng, grid), self.random_cauchy(rng, grid)) for _ in range(n_pairs)]
        logger.debug(f"Generated random Cauchy pairs [n={n_pairs}, seed={self.seed + stream}]")
        return pairs

    def random_profile(self, rng: np.random.Generator, grid: ConeGrid) -> BoundaryData:
        axis = rng.normal(size=3)
        return boundary_profile(
            grid,
            amplitude=rng.uniform(0.5, 1.5) * rng.choice([-1.0, 1.0]),
            cap=rng.uniform(0.55, 0.85),
            tilt=rng.uniform(-0.5, 0.5),
            axis=axis,
            wavenumber=rng.uniform(0.0, 8.0),
            phase=rng.uniform(0.0, 2.0 * np.pi),
        )

    def random_boundary_pairs(self, n_pairs: int, grid: ConeGrid,
                              stream: int = 0) -> List[Tuple[BoundaryData, BoundaryData]]:
        rng = make_rng(self.seed + 1000 + stream)
        return [(self.random_profile(rng, grid), self.random_profile(rng, grid)) for _ in range(n_pairs)]


def list_available_cases() -> List[str]:
    """List the named regression cases."""
    return SyntheticFieldGenerator().list_cases()


def get_case_summary(case_id: str) -> str:
    """One-line human-readable summary of a regression case."""
    case = SyntheticFieldGenerator().get_case(case_id)
    if not case:
        return f"Regression case {case_id} not found"
    return (f"{case_id}: {case['description']} "
            f"[center={case['center']}, radius={case['radius']}, profile={case.get('profile', 'bump')}]")


def random_points_in_double_cone(rng: np.random.Generator, n: int, margin: float = 0.1) -> List[SpacetimePoint]:
    """Points with |t - 1| + |x| <= 1 - margin."""
    points = []
    for _ in range(n):
        t = 1.0 + rng.uniform(-1.0 + margin, 1.0 - margin)
        r_max = 1.0 - margin - abs(t - 1.0)
        r = r_max * rng.uniform() ** (1.0 / 3.0)
        direction = rng.normal(size=3)
        points.append(SpacetimePoint(t=t, x=r * direction / np.linalg.norm(direction)))
    return points


def random_unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    vectors = rng.normal(size=(n, 3))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
