"""Symbolic and numerical tools for quantum mechanics on a noncommutative plane."""

__version__ = "0.1.0"
