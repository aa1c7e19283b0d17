"""
Configuration settings for the double cone verification suite.
Uses environment variables for output location, resolution and concurrency.
"""

import os
from typing import Tuple
from dotenv import load_dotenv

# Load environment variables from .env file if it exists
load_dotenv()


class Settings:
    """Configuration settings for the double cone verification suite."""

    # Output Configuration
    OUTPUT_DIR: str = os.getenv("DOUBLECONE_OUTPUT_DIR", "verification_output")

    # Momentum grid for bulk solutions (radial Gauss nodes on [0, K_MAX] x sphere)
    MOMENTUM_K_MAX: float = float(os.getenv("DOUBLECONE_K_MAX", "24.0"))
    MOMENTUM_RADIAL_NODES: int = int(os.getenv("DOUBLECONE_K_NODES", "64"))
    MOMENTUM_SPHERE: str = os.getenv("DOUBLECONE_K_SPHERE", "16x32")

    # Cauchy disc at t=1
    DISC_RADIAL_NODES: int = int(os.getenv("DOUBLECONE_DISC_NODES", "48"))
    DISC_SPHERE: str = os.getenv("DOUBLECONE_DISC_SPHERE", "24x48")

    # Null cone V
    CONE_U_NODES: int = int(os.getenv("DOUBLECONE_GRID_U", "96"))
    CONE_SPHERE: str = os.getenv("DOUBLECONE_GRID_SPHERE", "16x32")

    # Boundary k-space transform
    KSPACE_K_MAX: float = 160.0
    KSPACE_NODES: int = 256

    # Boundary l-space resampling (u = 1/(1+exp(-l)))
    ELL_HALF_WIDTH: float = 24.0
    ELL_POINTS: int = 2048
    ELL_TRUNCATION_TOL: float = 1e-8

    # eps -> 0+ regularization
    EPS_SPACING_FACTOR: float = 0.1
    EPS_RATIO: float = 0.5
    EPS_COUNT: int = 6
    EXTRAPOLATION_ORDER: int = 2
    EXTRAPOLATION_REL_TOL: float = 1e-4
    GOURSAT_REL_TOL: float = 1e-4

    # Pole-clustered quadrature around near-singular kernels
    CLUSTER_WINDOW: float = 0.05
    CLUSTER_WINDOW_NODES: int = 64
    CLUSTER_SIDE_NODES: int = 48

    # Bulk flow integration
    FLOW_RTOL: float = 1e-11
    FLOW_ATOL: float = 1e-13

    # Concurrency
    MAX_WORKERS: int = int(os.getenv("DOUBLECONE_MAX_WORKERS", "4"))
    EVAL_CHUNK: int = 256

    # Logging Configuration
    LOG_LEVEL: str = os.getenv("DOUBLECONE_LOG_LEVEL", "INFO")
    LOG_FORMAT: str = "[%(levelname)s] %(asctime)s - %(name)s - %(message)s"

    # Test Configuration
    DEFAULT_SEED: int = 20240611
    TEST_CASE_ID: str = "CENTERED_WIDE"

    @classmethod
    def parse_sphere(cls, spec: str) -> Tuple[int, int]:
        """Parse an 'NTHETAxNPHI' sphere grid specification."""
        try:
            n_theta, n_phi = (int(part) for part in spec.lower().split("x"))
        except ValueError as exc:
            raise ValueError(f"Sphere grid must look like 16x32, got {spec!r}") from exc
        return n_theta, n_phi

    @classmethod
    def validate_configuration(cls) -> list:
        """
        Validate that configured resolutions are usable.

        Returns:
            List of problems found in the configuration
        """
        problems = []

        for name in ("MOMENTUM_SPHERE", "DISC_SPHERE", "CONE_SPHERE"):
            try:
                n_theta, n_phi = cls.parse_sphere(getattr(cls, name))
                if n_theta < 1 or n_phi < 2:
                    problems.append(f"{name} has too few nodes")
            except ValueError as exc:
                problems.append(f"{name}: {exc}")

        if cls.CONE_U_NODES < 8:
            problems.append("DOUBLECONE_GRID_U must be at least 8")

        if cls.MOMENTUM_K_MAX <= 0:
            problems.append("DOUBLECONE_K_MAX must be positive")

        if cls.MAX_WORKERS < 1:
            problems.append("DOUBLECONE_MAX_WORKERS must be at least 1")

        return problems


# Global settings instance
settings = Settings()
