"""Spanning sets and seeded random elements for each algebra backend."""

from __future__ import annotations

from typing import List

import numpy as np

from .descriptors import AlgebraDescriptor
from .elements import AlgebraElement, coordinate, left_unit, tensor_element, unit
from .polynomial import Polynomial, monomials_up_to


def unit_basis(algebra: AlgebraDescriptor, max_degree: int = 2) -> List[AlgebraElement]:
    """Matrix units, monomials of degree <= max_degree, or products of both."""
    if algebra.is_matrix:
        return [left_unit(algebra, (a, b)) for a in range(algebra.n) for b in range(algebra.n)]
    if algebra.is_polynomial:
        return [
            AlgebraElement(algebra, Polynomial.monomial(e))
            for e in monomials_up_to(algebra.nvars, max_degree)
        ]
    return [
        tensor_element(a, b, algebra)
        for a in unit_basis(algebra.left, max_degree)
        for b in unit_basis(algebra.right, max_degree)
    ]


def generators(algebra: AlgebraDescriptor) -> List[AlgebraElement]:
    """A generating set: commuting with all of it means being central."""
    if algebra.is_matrix:
        return unit_basis(algebra)
    if algebra.is_polynomial:
        return [coordinate(algebra, a) for a in range(algebra.nvars)]
    return [tensor_element(g, unit(algebra.right), algebra) for g in generators(algebra.left)] + [
        tensor_element(unit(algebra.left), g, algebra) for g in generators(algebra.right)
    ]


def random_element(
    algebra: AlgebraDescriptor,
    rng: np.random.Generator,
    max_degree: int = 2,
    hermitian: bool = False,
    real: bool = False,
) -> AlgebraElement:
    """Seeded random element; polynomials get every monomial up to max_degree."""
    if algebra.is_matrix:
        n = algebra.n
        mat = rng.normal(size=(n, n))
        if not real:
            mat = mat + 1j * rng.normal(size=(n, n))
        if hermitian:
            mat = (mat + mat.conj().T) / 2
        return AlgebraElement(algebra, mat)
    if algebra.is_polynomial:
        terms = {}
        for exps in monomials_up_to(algebra.nvars, max_degree):
            c = rng.normal()
            if not (real or hermitian):
                c = c + 1j * rng.normal()
            terms[exps] = c
        return AlgebraElement(algebra, Polynomial(algebra.nvars, terms))
    # two simple tensors keep products cheap while being generic enough
    total = None
    for _ in range(2):
        term = tensor_element(
            random_element(algebra.left, rng, max_degree, hermitian, real),
            random_element(algebra.right, rng, max_degree, hermitian, real),
            algebra,
        )
        total = term if total is None else total + term
    return total


def random_hermitian(algebra: AlgebraDescriptor, rng: np.random.Generator, max_degree: int = 2) -> AlgebraElement:
    return random_element(algebra, rng, max_degree, hermitian=True)
