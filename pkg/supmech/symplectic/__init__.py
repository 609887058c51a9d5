"""Symplectic structures, Poisson brackets and canonical transformations."""
