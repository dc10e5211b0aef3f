"""Cipolla polynomials, the inverse logarithmic integral and explicit prime bounds."""

__version__ = "0.1.0"
