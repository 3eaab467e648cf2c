"""Quasi-Newton directions as steepest descent under the ellipsoid norm."""

__version__ = "0.1.0"
