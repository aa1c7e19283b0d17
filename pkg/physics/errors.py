"""Exception types raised by the numerical core."""


class DoubleConeError(Exception):
    """Base class for all errors raised by the double cone library."""


class DomainError(DoubleConeError, ValueError):
    """An argument lies outside the region where the operation is defined."""


class GridError(DoubleConeError, ValueError):
    """Invalid quadrature parameters, non-uniform samples or mismatched grids."""


class BranchCutError(DoubleConeError, ValueError):
    """A complex argument lies on the branch cut of a multivalued function."""


class UnregularizedError(DoubleConeError, ValueError):
    """A singular kernel was evaluated without its eps-regularization."""


class ExtrapolationError(DoubleConeError, ArithmeticError):
    """An eps -> 0+ limit could not be extrapolated to the requested accuracy."""


class ResampleError(DoubleConeError, ArithmeticError):
    """Boundary data do not decay within the l-grid window."""


class MassMismatchError(DoubleConeError, ValueError):
    """Two solutions with different masses were paired."""


class FitError(DoubleConeError, ArithmeticError):
    """A log-log decay fit has a residual above threshold."""


class ConfigError(DoubleConeError, ValueError):
    """A configuration file or command line could not be turned into a valid run configuration."""
