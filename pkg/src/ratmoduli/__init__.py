"""Invariants of the two-sided Moebius action on cubic rational maps."""

__version__ = "0.1.0"
