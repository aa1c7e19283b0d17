"""
Double Cone Verification

Numerical verification of the bulk-boundary correspondence for the free Klein-Gordon
field on the unit double cone: the vacuum restricted to the double cone, its null
boundary data on the lower cone V, the boundary state lambda, the modular flow and
the explicit mass-dependent part of the modular generator.

The suites run as a LangGraph pipeline and write a machine-readable report.
"""

__version__ = "1.0.0"
__author__ = "Research Project"
__email__ = "research@example.com"
