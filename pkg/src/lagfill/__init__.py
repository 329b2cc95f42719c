"""Explicit Lagrangian fillings of curves with boundary on planes in C^2."""

__version__ = "0.1.0"
