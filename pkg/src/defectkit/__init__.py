"""Defect functors over finitely presented abelian groups."""

__version__ = "0.1.0"
