"""Cohomology, Steenrod operations and smoothing classification for closed 7-10 manifolds."""

__version__ = "0.1.0"
