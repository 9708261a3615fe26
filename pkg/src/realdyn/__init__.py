"""Exact certification of real rational maps whose periodic points are all real."""

__version__ = "0.1.0"
