"""Numerical toolkit for variations of determinants of Laplacians on hyperbolic orbisurfaces."""

__version__ = "0.1.0"
