"""Numerical checks of cross-entropy fluctuation relations for quantum channels."""

__version__ = "0.1.0"
