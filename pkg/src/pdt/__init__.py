"""Exact and numerical tools for degenerations of type IV variations of Hodge structure."""

__version__ = "0.1.0"
