"""Differential forms and the Cartan calculus."""
