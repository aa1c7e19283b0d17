"""Numerical core: geometry of the double cone, bulk solutions, boundary data, Goursat inversion and the modular flow."""

from .errors import (
    DoubleConeError, DomainError, GridError, BranchCutError, UnregularizedError,
    ExtrapolationError, ResampleError, MassMismatchError, FitError, ConfigError,
)
from .bulk import solution_from_cauchy, sigma_bulk, mu_vacuum
from .boundary import restrict_to_V, sigma_boundary, mu_lambda_kspace, mu_lambda_kernel, mu_lambda_hspace
from .goursat import default_goursat_spec, goursat_solve
from .modular import beta_flow_boundary, s_tau, two_point_flowed
from .generator import delta_m, delta_diff, symbol_b

__all__ = [
    'DoubleConeError', 'DomainError', 'GridError', 'BranchCutError', 'UnregularizedError',
    'ExtrapolationError', 'ResampleError', 'MassMismatchError', 'FitError', 'ConfigError',
    'solution_from_cauchy', 'sigma_bulk', 'mu_vacuum',
    'restrict_to_V', 'sigma_boundary', 'mu_lambda_kspace', 'mu_lambda_kernel', 'mu_lambda_hspace',
    'default_goursat_spec', 'goursat_solve',
    'beta_flow_boundary', 's_tau', 'two_point_flowed',
    'delta_m', 'delta_diff', 'symbol_b',
]
