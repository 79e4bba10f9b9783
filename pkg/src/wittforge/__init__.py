"""Exact Witt vector, Dieudonne module and display computations at finite level."""

__version__ = "0.1.0"
