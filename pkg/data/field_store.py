"""
Dumps of field data for caching and regression baselines.

Cauchy data and mode amplitudes are stored as .npz archives whose `header` entry is the
JSON of the grid model; boundary data go to CSV rows (direction index, u, value).
"""

import csv
import json
import logging
from pathlib import Path
from typing import Union

import numpy as np

from models.boundary_data import BoundaryData
from models.fields import CauchyData, ModeAmplitude
from models.grids import BallGrid
from physics.numerics import cone_quadratures

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def save_cauchy(data: CauchyData, path: PathLike) -> Path:
    path = Path(path).with_suffix(".npz")
    header = json.dumps({"kind": "cauchy", "grid": data.grid.model_dump(), "support_radius": data.support_radius})
    np.savez(path, header=np.array(header), f=data.f, g=data.g)
    logger.debug(f"Saved Cauchy data [path={path}]")
    return path


def load_cauchy(path: PathLike) -> CauchyData:
    with np.load(path) as archive:
        header = json.loads(str(archive["header"]))
        if header.get("kind") != "cauchy":
            raise ValueError(f"{path} does not hold Cauchy data")
        return CauchyData(
            grid=BallGrid(**header["grid"]),
            f=archive["f"],
            g=archive["g"],
            support_radius=header["support_radius"],
        )


def save_modes(modes: ModeAmplitude, path: PathLike) -> Path:
    path = Path(path).with_suffix(".npz")
    header = json.dumps({"kind": "modes", "grid": modes.grid.model_dump(), "mass": modes.mass})
    np.savez(path, header=np.array(header), values=modes.values)
    logger.debug(f"Saved mode amplitudes [path={path}, mass={modes.mass}]")
    return path


def load_modes(path: PathLike) -> ModeAmplitude:
    with np.load(path) as archive:
        header = json.loads(str(archive["header"]))
        if header.get("kind") != "modes":
            raise ValueError(f"{path} does not hold mode amplitudes")
        return ModeAmplitude(mass=header["mass"], grid=BallGrid(**header["grid"]), values=archive["values"])


def write_boundary_csv(phi: BoundaryData, path: PathLike) -> Path:
    """Rows (direction_index, u, value) over the cone grid."""
    path = Path(path)
    _, quad = cone_quadratures(phi.grid)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(["direction_index", "u", "value"])
        for index, row in enumerate(phi.values):
            for u, value in zip(quad.nodes, row):
                writer.writerow([index, repr(float(u)), repr(float(value))])
    return path
