"""Derivations, Lie brackets and derivation bases."""
