"""Fiber decomposition of elements over the center.

Every supported algebra is a free module over a monomial-spanned part of its
center.  An element splits into central monomials (the fiber keys) times
constant fiber vectors:

    Matrix(n), Matrix(n)*Matrix(m)  key ()          fiber: flattened matrix
    Polynomial, Poly*Poly            key monomial    fiber: one coefficient
    Poly*Matrix                      key monomial    fiber: right matrix
    Matrix*Poly                      key monomial    fiber: left matrix

Linear problems whose unknowns are central coefficients decouple across keys
once the basis data lives in the constant fiber, which is how the derivation
expander and the Hamiltonian solver work.
"""

from __future__ import annotations

from typing import Dict, Tuple

import numpy as np

from .descriptors import AlgebraDescriptor
from .elements import AlgebraElement, from_flat, scalar, tensor_element, unit
from .polynomial import Polynomial

FiberKey = Tuple[int, ...]


def fiber_dim(algebra: AlgebraDescriptor) -> int:
    if algebra.is_matrix or algebra.is_matrix_product:
        return algebra.flat_dim ** 2
    if algebra.is_commutative:
        return 1
    if algebra.left.is_polynomial:
        return algebra.right.n ** 2
    return algebra.left.n ** 2


def fibers(element: AlgebraElement) -> Dict[FiberKey, np.ndarray]:
    """Split ``element`` into {central monomial key: constant fiber vector}."""
    algebra = element.algebra
    if algebra.is_matrix or algebra.is_matrix_product:
        flat = element.flatten().ravel()
        return {(): flat} if np.any(flat != 0) else {}
    if algebra.is_polynomial:
        return {k: np.array([c]) for k, c in element.polynomial.items()}
    out: Dict[FiberKey, np.ndarray] = {}
    if algebra.left.is_polynomial and algebra.right.is_polynomial:
        for key, right in element.payload:
            for rkey, c in right.polynomial.items():
                full = tuple(key) + tuple(rkey)
                out[full] = out.get(full, np.zeros(1, dtype=complex)) + c
        return out
    if algebra.left.is_polynomial:
        for key, right in element.payload:
            out[tuple(key)] = right.matrix.ravel().copy()
        return out
    n = algebra.left.n
    for (a, b), right in element.payload:
        for rkey, c in right.polynomial.items():
            vec = out.setdefault(tuple(rkey), np.zeros(n * n, dtype=complex))
            vec[a * n + b] += c
    return out


def central_monomial(algebra: AlgebraDescriptor, key: FiberKey) -> AlgebraElement:
    """The central element whose fiber key is ``key``."""
    if algebra.is_matrix or algebra.is_matrix_product:
        return unit(algebra)
    if algebra.is_polynomial:
        return AlgebraElement(algebra, Polynomial.monomial(key))
    left, right = algebra.left, algebra.right
    if left.is_polynomial and right.is_polynomial:
        k = left.nvars
        return tensor_element(
            AlgebraElement(left, Polynomial.monomial(key[:k])),
            AlgebraElement(right, Polynomial.monomial(key[k:])),
            algebra,
        )
    if left.is_polynomial:
        return tensor_element(AlgebraElement(left, Polynomial.monomial(key)), unit(right), algebra)
    return tensor_element(unit(left), AlgebraElement(right, Polynomial.monomial(key)), algebra)


def central_element(algebra: AlgebraDescriptor, coefficients: Dict[FiberKey, complex]) -> AlgebraElement:
    """Σ z_key · central_monomial(key)."""
    if algebra.is_matrix or algebra.is_matrix_product:
        return scalar(algebra, coefficients.get((), 0.0))
    if algebra.is_polynomial:
        return AlgebraElement(algebra, Polynomial(algebra.nvars, coefficients))
    total = scalar(algebra, 0.0)
    for key, z in coefficients.items():
        if z != 0:
            total = total + central_monomial(algebra, key).scale(z)
    return total


def from_fibers(algebra: AlgebraDescriptor, parts: Dict[FiberKey, np.ndarray]) -> AlgebraElement:
    """Inverse of ``fibers``."""
    if algebra.is_matrix or algebra.is_matrix_product:
        dim = algebra.flat_dim
        vec = parts.get((), np.zeros(dim * dim, dtype=complex))
        return from_flat(algebra, np.asarray(vec, dtype=complex).reshape(dim, dim))
    if algebra.is_commutative:
        return central_element(algebra, {k: complex(v[0]) for k, v in parts.items()})
    total = scalar(algebra, 0.0)
    if algebra.left.is_polynomial:
        m = algebra.right.n
        for key, vec in parts.items():
            block = AlgebraElement(algebra.right, np.asarray(vec).reshape(m, m))
            total = total + tensor_element(AlgebraElement(algebra.left, Polynomial.monomial(key)), block, algebra)
        return total
    n = algebra.left.n
    for key, vec in parts.items():
        block = AlgebraElement(algebra.left, np.asarray(vec).reshape(n, n))
        total = total + tensor_element(block, AlgebraElement(algebra.right, Polynomial.monomial(key)), algebra)
    return total


def scalar_part(element: AlgebraElement) -> complex:
    """Normalized trace on matrix algebras, constant term on commutative ones."""
    algebra = element.algebra
    if algebra.is_matrix or algebra.is_matrix_product:
        flat = element.flatten()
        return complex(np.trace(flat) / flat.shape[0])
    parts = fibers(element)
    zero_key = tuple([0] * _key_length(algebra))
    vec = parts.get(zero_key)
    if vec is None:
        return 0j
    if vec.shape[0] == 1:
        return complex(vec[0])
    side = int(round(np.sqrt(vec.shape[0])))
    return complex(np.trace(vec.reshape(side, side)) / side)


def _key_length(algebra: AlgebraDescriptor) -> int:
    if algebra.is_polynomial:
        return algebra.nvars
    if algebra.left.is_polynomial and algebra.right.is_polynomial:
        return algebra.left.nvars + algebra.right.nvars
    return algebra.left.nvars if algebra.left.is_polynomial else algebra.right.nvars
