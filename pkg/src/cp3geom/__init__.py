"""Numerical geometry of the homogeneous metrics g_a on CP^3 and their hypersurfaces."""

from . import cp3core, family, halgebra, hyper

__all__ = ["halgebra", "cp3core", "hyper", "family"]
__version__ = "0.1.0"
