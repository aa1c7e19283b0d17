"""Synthetic test data and field storage."""

from .synthetic_fields import SyntheticFieldGenerator, list_available_cases, get_case_summary, make_rng
from .field_store import save_cauchy, load_cauchy, save_modes, load_modes, write_boundary_csv

__all__ = [
    'SyntheticFieldGenerator', 'list_available_cases', 'get_case_summary', 'make_rng',
    'save_cauchy', 'load_cauchy', 'save_modes', 'load_modes', 'write_boundary_csv',
]
