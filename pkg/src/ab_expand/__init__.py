"""Expansions of numbers in [0,1] with respect to two integer bases a < b."""

__version__ = "0.1.0"
