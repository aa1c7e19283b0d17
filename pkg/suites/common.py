"""
Shared plumbing for the verification suites: grids derived from the run configuration,
timed check recording and CSV tables.
"""

import csv
import json
import logging
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from config.settings import settings
from data.synthetic_fields import SyntheticFieldGenerator, make_rng
from models.flow import FlowParams
from models.grids import BallGrid, ConeGrid, EpsSchedule
from models.report import CheckRecord, ExperimentConfig
from physics.bulk import solution_from_cauchy
from physics.errors import DoubleConeError
from physics.numerics import default_schedule

logger = logging.getLogger(__name__)


class SuiteContext:
    """Everything a suite needs: configuration, data generator, grids and the check log."""

    # Bulk-side grids sized for desk-scale runs of the mode sums
    SUITE_K_MAX = 14.0
    SUITE_K_RADIAL = 40
    SUITE_K_SPHERE = (10, 20)
    SUITE_CAUCHY_DISC = (48, 16, 32)
    SUITE_FLUX_DISC = (32, 12, 24)
    SUITE_CONE_U = 64
    SUITE_CONE_SPHERE = (8, 16)

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.generator = SyntheticFieldGenerator(seed=config.seed)
        self.checks: List[CheckRecord] = []
        self.tables: Dict[str, Tuple[List[str], List[list]]] = {}
        self.summaries: Dict[str, object] = {}

    def rng(self, stream: int):
        return make_rng(self.config.seed + stream)

    def pairs(self, default: int) -> int:
        return self.config.pairs or default

    def momentum_grid(self) -> BallGrid:
        n_theta, n_phi = self.SUITE_K_SPHERE
        return BallGrid(radius=self.SUITE_K_MAX, n_radial=self.SUITE_K_RADIAL, n_theta=n_theta, n_phi=n_phi)

    def cauchy_grid(self) -> BallGrid:
        n_radial, n_theta, n_phi = self.SUITE_CAUCHY_DISC
        return BallGrid(radius=1.0, n_radial=n_radial, n_theta=n_theta, n_phi=n_phi)

    def flux_grid(self) -> BallGrid:
        n_radial, n_theta, n_phi = self.SUITE_FLUX_DISC
        return BallGrid(radius=1.0, n_radial=n_radial, n_theta=n_theta, n_phi=n_phi)

    def cone_grid(self, n_u: Optional[int] = None) -> ConeGrid:
        n_theta, n_phi = self.config.grid_sphere or self.SUITE_CONE_SPHERE
        return ConeGrid(n_u=n_u or self.config.grid_u or self.SUITE_CONE_U, n_theta=n_theta, n_phi=n_phi)

    def profile_grid(self) -> ConeGrid:
        """Grid for synthetic boundary profiles, which are cheap to sample."""
        n_theta, n_phi = self.config.grid_sphere or (4, 8)
        return ConeGrid(n_u=self.config.grid_u or settings.CONE_U_NODES, n_theta=n_theta, n_phi=n_phi)

    def schedule(self, grid: ConeGrid) -> EpsSchedule:
        base = default_schedule(grid.spacing)
        return EpsSchedule.geometric(
            eps0=self.config.eps0 or base.eps_values[0],
            ratio=self.config.eps_ratio or settings.EPS_RATIO,
            count=self.config.eps_count or settings.EPS_COUNT,
            order=settings.EXTRAPOLATION_ORDER,
        )

    def solution(self, cauchy, mass: float):
        return solution_from_cauchy(cauchy, mass, self.momentum_grid())

    def record(self, suite: str, name: str, compute: Callable[[], object], tolerance: float = 0.0,
               reference: float = 0.0, minimum: Optional[float] = None) -> CheckRecord:
        """
        Run one check. compute returns a value or (value, detail); numerical
        failures become failed records instead of aborting the suite.
        With minimum set the check is one-sided: value >= minimum.
        """
        tolerance = self.config.tolerance(name, tolerance)
        started = time.perf_counter()
        try:
            outcome = compute()
            value, detail = outcome if isinstance(outcome, tuple) else (outcome, None)
            runtime = time.perf_counter() - started
            if minimum is not None:
                record = CheckRecord.at_least(suite, name, float(value), minimum, runtime, detail)
            else:
                record = CheckRecord.compare(
                    suite=suite,
                    name=name,
                    value=float(value),
                    tolerance=tolerance,
                    runtime_s=runtime,
                    reference=reference,
                    detail=detail,
                )
        except DoubleConeError as e:
            logger.error(f"Check failed to evaluate [suite={suite}] [check={name}] [error={str(e)}]")
            record = CheckRecord.create_error_record(suite, name, f"{type(e).__name__}: {e}")
        status = "PASS" if record.passed else "FAIL"
        logger.info(f"{status} {name} [value={record.value:.3e}, tolerance={record.tolerance:.1e}, "
                    f"runtime={record.runtime_s:.2f}s]")
        self.checks.append(record)
        return record

    def add_table(self, name: str, header: Sequence[str], rows: List[list]) -> None:
        self.tables[name] = (list(header), rows)

    def add_summary(self, name: str, payload: object) -> None:
        self.summaries[name] = payload

    def write_tables(self, output_dir: Path) -> List[Path]:
        written = []
        for name, (header, rows) in self.tables.items():
            path = output_dir / f"{name}.csv"
            with open(path, 'w', newline='') as f:
                writer = csv.writer(f)
                writer.writerow(header)
                writer.writerows(rows)
            written.append(path)
        for name, payload in self.summaries.items():
            path = output_dir / f"{name}.json"
            path.write_text(json.dumps(payload, indent=2))
            written.append(path)
        return written

    def geometric_taus(self) -> List[float]:
        """Configured flow parameters converted to the geometric convention."""
        if self.config.param == "modular":
            return [FlowParams.from_modular(tau).tau for tau in self.config.taus]
        return list(self.config.taus)
