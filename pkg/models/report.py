"""
Pydantic models for experiment configuration and the verification report.
"""

from datetime import datetime, timezone
from typing import Dict, List, Literal, Optional, Tuple
import platform

from pydantic import BaseModel, Field, field_validator, model_validator

SUITES: Tuple[str, ...] = (
    "bulk-boundary",
    "symplectic",
    "goursat",
    "modular",
    "kms",
    "generator",
    "symbol",
)

SuiteName = Literal["bulk-boundary", "symplectic", "goursat", "modular", "kms", "generator", "symbol", "all"]


class ExperimentConfig(BaseModel):
    """Validated configuration of one verification run."""

    suite: SuiteName = Field(description="Suite to run, or 'all'")
    masses: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0])
    taus: List[float] = Field(default_factory=lambda: [-1.0, -0.5, 0.5, 1.0])
    param: Literal["geometric", "modular"] = Field(
        default="geometric",
        description="Whether taus are geometric flow parameters or modular-group parameters"
    )
    seed: int = Field(default=20240611)
    output_dir: str = Field(default="verification_output")

    # Grid overrides; None means the settings default
    grid_u: Optional[int] = Field(default=None, ge=8)
    grid_sphere: Optional[Tuple[int, int]] = Field(default=None)
    eps0: Optional[float] = Field(default=None, gt=0.0)
    eps_ratio: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    eps_count: Optional[int] = Field(default=None, ge=3)
    pairs: Optional[int] = Field(default=None, ge=1, description="Random pairs per check, overriding suite defaults")

    tolerances: Dict[str, float] = Field(default_factory=dict, description="Per-check tolerance overrides")

    @field_validator('masses')
    @classmethod
    def validate_masses(cls, v):
        """Masses must be non-negative."""
        if not v:
            raise ValueError('At least one mass is required')
        if any(m < 0.0 for m in v):
            raise ValueError('Masses must be non-negative')
        return [float(m) for m in v]

    @field_validator('grid_sphere')
    @classmethod
    def validate_sphere(cls, v):
        if v is not None and (v[0] < 1 or v[1] < 2):
            raise ValueError('Sphere grid needs n_theta >= 1 and n_phi >= 2')
        return v

    @field_validator('tolerances')
    @classmethod
    def validate_tolerances(cls, v):
        if any(tol <= 0.0 for tol in v.values()):
            raise ValueError('Tolerances must be positive')
        return v

    @model_validator(mode='after')
    def validate_taus(self):
        if not self.taus:
            raise ValueError('At least one flow parameter is required')
        return self

    def selected_suites(self) -> List[str]:
        return list(SUITES) if self.suite == "all" else [self.suite]

    def tolerance(self, name: str, default: float) -> float:
        return self.tolerances.get(name, default)


class CheckRecord(BaseModel):
    """Outcome of one named numerical check."""

    suite: str
    name: str = Field(description="Deterministic check name")
    value: float = Field(description="Measured discrepancy or quantity")
    reference: float = Field(default=0.0, description="Reference value the measurement is compared with")
    tolerance: float
    passed: bool
    runtime_s: float = Field(ge=0.0)
    comparison: Literal["within", "at_least"] = Field(
        default="within",
        description="within: |value - reference| <= tolerance; at_least: value >= reference"
    )
    detail: Optional[str] = None

    @classmethod
    def compare(
        cls,
        suite: str,
        name: str,
        value: float,
        tolerance: float,
        runtime_s: float,
        reference: float = 0.0,
        detail: Optional[str] = None,
    ) -> "CheckRecord":
        """Build a record that passes when |value - reference| <= tolerance."""
        passed = bool(abs(value - reference) <= tolerance)
        return cls(
            suite=suite,
            name=name,
            value=float(value),
            reference=float(reference),
            tolerance=float(tolerance),
            passed=passed,
            runtime_s=runtime_s,
            detail=detail,
        )

    @classmethod
    def at_least(
        cls,
        suite: str,
        name: str,
        value: float,
        minimum: float,
        runtime_s: float,
        detail: Optional[str] = None,
    ) -> "CheckRecord":
        """Build a record that passes when value >= minimum."""
        return cls(
            suite=suite,
            name=name,
            value=float(value),
            reference=float(minimum),
            tolerance=0.0,
            passed=bool(value >= minimum),
            runtime_s=runtime_s,
            comparison="at_least",
            detail=detail,
        )

    @classmethod
    def create_error_record(cls, suite: str, name: str, error_message: str) -> "CheckRecord":
        """Record a check that could not be evaluated."""
        return cls(
            suite=suite,
            name=name,
            value=float('nan'),
            tolerance=0.0,
            passed=False,
            runtime_s=0.0,
            detail=error_message,
        )


class Report(BaseModel):
    """Machine-readable result of a verification run."""

    checks: List[CheckRecord] = Field(default_factory=list)
    environment: Dict[str, str] = Field(default_factory=dict)
    config: ExperimentConfig
    error_message: Optional[str] = None

    @classmethod
    def create(cls, config: ExperimentConfig, checks: List[CheckRecord]) -> "Report":
        """Stamp the environment and wrap the check records."""
        import numpy
        import scipy
        return cls(
            checks=checks,
            config=config,
            environment={
                "python": platform.python_version(),
                "platform": platform.platform(),
                "numpy": numpy.__version__,
                "scipy": scipy.__version__,
                "created_utc": datetime.now(timezone.utc).isoformat(),
            },
        )

    @property
    def all_passed(self) -> bool:
        return self.error_message is None and all(check.passed for check in self.checks)

    def failed_checks(self) -> List[CheckRecord]:
        return [check for check in self.checks if not check.passed]

    def summary_line(self) -> str:
        n_failed = len(self.failed_checks())
        return f"{len(self.checks) - n_failed}/{len(self.checks)} checks passed"
