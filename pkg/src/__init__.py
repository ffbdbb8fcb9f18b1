"""Torus Multiplier Lab - certification toolkit for Fourier multipliers on T^d."""

__version__ = "0.1.0"
