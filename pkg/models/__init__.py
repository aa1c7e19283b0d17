"""Pydantic models for structured data handling."""

from .spacetime import SpacetimePoint, LightconeCoord, KillingSample
from .grids import (
    Quadrature1D, SphereGrid, BallGrid, ConeGrid, EllGrid, EpsSchedule,
    ExtrapolationResult, FourierSpectrum,
)
from .fields import CauchyData, ModeAmplitude, KGSolution
from .boundary_data import BoundaryData, BoundarySpectrum, HSpectrum
from .flow import (
    GoursatSpec, FlowParams, FmKernel, SymbolSample, SymbolFit, KMSComparison, SochockijProfile,
)
from .report import ExperimentConfig, CheckRecord, Report, SUITES

__all__ = [
    'SpacetimePoint', 'LightconeCoord', 'KillingSample',
    'Quadrature1D', 'SphereGrid', 'BallGrid', 'ConeGrid', 'EllGrid', 'EpsSchedule',
    'ExtrapolationResult', 'FourierSpectrum',
    'CauchyData', 'ModeAmplitude', 'KGSolution',
    'BoundaryData', 'BoundarySpectrum', 'HSpectrum',
    'GoursatSpec', 'FlowParams', 'FmKernel', 'SymbolSample', 'SymbolFit', 'KMSComparison', 'SochockijProfile',
    'ExperimentConfig', 'CheckRecord', 'Report', 'SUITES',
]
