"""Numerical phase-space concentration lab."""

__version__ = "0.1.0"
