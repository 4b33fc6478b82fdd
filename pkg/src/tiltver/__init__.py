"""Exact computations with SL2 tilting modules in positive characteristic."""

__version__ = "0.1.0"
