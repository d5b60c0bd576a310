"""Numerical toolkit for completeness of ends of surfaces with singularities."""

__version__ = "0.1.0"
