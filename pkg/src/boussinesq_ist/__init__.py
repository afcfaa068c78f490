"""Numerical inverse scattering toolkit for the bad Boussinesq equation."""

__version__ = "0.1.0"
