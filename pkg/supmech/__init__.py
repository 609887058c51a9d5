"""Noncommutative symplectic mechanics on derivation-based differential calculi."""

__version__ = "1.0.0"
