"""Tensor products of symplectic algebras and the world classification."""
