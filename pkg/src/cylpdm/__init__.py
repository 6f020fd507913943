"""Spectral toolkit for radial power-law position-dependent-mass problems in cylindrical coordinates."""

__version__ = "0.1.0"
