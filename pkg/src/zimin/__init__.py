"""Zimin words, unavoidable patterns and long Z_n-avoiding constructions."""

__version__ = "0.1.0"
