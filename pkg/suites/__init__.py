"""Verification suites, one module per area of the correspondence."""

from typing import Callable, Dict

from . import bulk_boundary, generator, goursat, kms, modular, symbol, symplectic
from .common import SuiteContext

SUITE_RUNNERS: Dict[str, Callable[[SuiteContext], None]] = {
    bulk_boundary.SUITE: bulk_boundary.run,
    symplectic.SUITE: symplectic.run,
    goursat.SUITE: goursat.run,
    modular.SUITE: modular.run,
    kms.SUITE: kms.run,
    generator.SUITE: generator.run,
    symbol.SUITE: symbol.run,
}

__all__ = ['SUITE_RUNNERS', 'SuiteContext']
