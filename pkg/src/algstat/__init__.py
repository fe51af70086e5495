"""Computational toolkit for algebraic statistics."""

__version__ = "0.1.0"
