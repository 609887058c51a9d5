"""Functional API over algebra elements: products, involution, centers."""

from __future__ import annotations

import enum

from .descriptors import AlgebraDescriptor
from .elements import AlgebraElement, Scalar
from .elements import tensor_element as _tensor_element
from .sampling import generators


class CenterKind(str, enum.Enum):
    SCALARS_ONLY = "ScalarsOnly"
    WHOLE_ALGEBRA = "WholeAlgebra"
    LEFT_FACTOR_CENTRAL = "LeftFactorCentral"
    RIGHT_FACTOR_CENTRAL = "RightFactorCentral"


def add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a + b


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def scale(z: Scalar, a: AlgebraElement) -> AlgebraElement:
    return a.scale(z)


def star(a: AlgebraElement) -> AlgebraElement:
    return a.star()


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b - b * a


def anticommutator_half(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """(ab + ba)/2."""
    return (a * b + b * a).scale(0.5)


def is_central(a: AlgebraElement) -> bool:
    tol = a.algebra.tolerance
    return all(commutator(a, g).norm() <= tol for g in generators(a.algebra))


def center_description(algebra: AlgebraDescriptor) -> CenterKind:
    if algebra.is_commutative:
        return CenterKind.WHOLE_ALGEBRA
    if algebra.is_matrix or algebra.is_matrix_product:
        return CenterKind.SCALARS_ONLY
    if algebra.left.is_commutative:
        return CenterKind.LEFT_FACTOR_CENTRAL
    return CenterKind.RIGHT_FACTOR_CENTRAL


def is_special(algebra: AlgebraDescriptor) -> bool:
    """Trivial center and every derivation inner: the full matrix algebras."""
    return (algebra.is_matrix or algebra.is_matrix_product) and not algebra.is_commutative


def hermitian_part_check(a: AlgebraElement) -> bool:
    return (a - a.star()).norm() <= a.algebra.tolerance


def tensor_element(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return _tensor_element(a, b)
