"""Exact computation with separated nets in nilpotent Lie groups."""

__version__ = "0.1.0"
