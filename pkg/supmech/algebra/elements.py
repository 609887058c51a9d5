"""Algebra elements: matrix, polynomial and tensor payloads.

Tensor elements are kept in canonical form: every left factor is a basis
unit (matrix unit E_ab or a monomial with coefficient 1), pairs sharing a
left unit are merged, and pairs with a zero right factor are dropped.
"""

from __future__ import annotations

from numbers import Number
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

from ..errors import AlgebraMismatch
from .descriptors import AlgebraDescriptor
from .polynomial import Polynomial

Scalar = Union[complex, float, int]
LeftKey = Tuple[int, ...]


class AlgebraElement:
    """An immutable member of a *-algebra."""

    __slots__ = ("algebra", "payload")

    def __init__(self, algebra: AlgebraDescriptor, payload):
        self.algebra = algebra
        if algebra.is_matrix:
            arr = np.array(payload, dtype=complex)
            if arr.shape != (algebra.n, algebra.n):
                raise ValueError(
                    f"matrix payload shape {arr.shape} does not match {algebra.label}"
                )
            arr.setflags(write=False)
            payload = arr
        elif algebra.is_polynomial:
            if not isinstance(payload, Polynomial) or payload.nvars != algebra.nvars:
                raise ValueError(f"polynomial payload must have {algebra.nvars} variables")
        else:
            payload = tuple(payload)
        self.payload = payload

    # -- arithmetic ----------------------------------------------------------

    def _same(self, other: "AlgebraElement") -> None:
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise AlgebraMismatch(
                f"{self.algebra.label} vs {other.algebra.label}",
                {"left": self.algebra.label, "right": other.algebra.label},
            )

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same(other)
        if self.algebra.is_matrix:
            return AlgebraElement(self.algebra, self.payload + other.payload)
        if self.algebra.is_polynomial:
            return AlgebraElement(self.algebra, self.payload + other.payload)
        acc = dict(self.payload)
        for key, right in other.payload:
            acc[key] = acc[key] + right if key in acc else right
        return _tensor_from_units(self.algebra, acc)

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-1.0)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(-1.0)

    def scale(self, z: Scalar) -> "AlgebraElement":
        z = complex(z)
        if self.algebra.is_matrix:
            return AlgebraElement(self.algebra, z * self.payload)
        if self.algebra.is_polynomial:
            return AlgebraElement(self.algebra, self.payload.scale(z))
        if z == 0:
            return zero(self.algebra)
        return AlgebraElement(self.algebra, tuple((k, r.scale(z)) for k, r in self.payload))

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        self._same(other)
        if self.algebra.is_matrix:
            return AlgebraElement(self.algebra, self.payload @ other.payload)
        if self.algebra.is_polynomial:
            return AlgebraElement(self.algebra, self.payload * other.payload)
        left_is_matrix = self.algebra.left.is_matrix
        acc: Dict[LeftKey, AlgebraElement] = {}
        for k1, r1 in self.payload:
            for k2, r2 in other.payload:
                if left_is_matrix:
                    if k1[1] != k2[0]:
                        continue
                    key = (k1[0], k2[1])
                else:
                    key = tuple(a + b for a, b in zip(k1, k2))
                prod = r1 * r2
                acc[key] = acc[key] + prod if key in acc else prod
        return _tensor_from_units(self.algebra, acc)

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        return NotImplemented

    def star(self) -> "AlgebraElement":
        if self.algebra.is_matrix:
            return AlgebraElement(self.algebra, self.payload.conj().T)
        if self.algebra.is_polynomial:
            return AlgebraElement(self.algebra, self.payload.conjugate())
        left_is_matrix = self.algebra.left.is_matrix
        acc = {}
        for key, right in self.payload:
            new_key = (key[1], key[0]) if left_is_matrix else key
            acc[new_key] = right.star()
        return _tensor_from_units(self.algebra, acc)

    # -- measurement ---------------------------------------------------------

    def norm(self) -> float:
        """Frobenius (matrix), max coefficient modulus (polynomial), or the
        root-sum-square of right-factor norms over left units (tensor)."""
        if self.algebra.is_matrix:
            return float(np.linalg.norm(self.payload))
        if self.algebra.is_polynomial:
            return self.payload.norm()
        return float(np.sqrt(sum(r.norm() ** 2 for _, r in self.payload)))

    def is_zero(self, tolerance: float | None = None) -> bool:
        tol = self.algebra.tolerance if tolerance is None else tolerance
        return self.norm() <= tol

    def is_close(self, other: "AlgebraElement", tolerance: float | None = None) -> bool:
        return (self - other).is_zero(tolerance)

    def distance(self, other: "AlgebraElement") -> float:
        return (self - other).norm()

    # -- views ---------------------------------------------------------------

    @property
    def matrix(self) -> np.ndarray:
        if not self.algebra.is_matrix:
            raise TypeError(f"{self.algebra.label} element has no matrix payload")
        return self.payload

    @property
    def polynomial(self) -> Polynomial:
        if not self.algebra.is_polynomial:
            raise TypeError(f"{self.algebra.label} element has no polynomial payload")
        return self.payload

    def pairs(self) -> Iterator[Tuple["AlgebraElement", "AlgebraElement"]]:
        """Canonical (left unit, right factor) pairs of a tensor element."""
        if not self.algebra.is_tensor:
            raise TypeError("pairs() is only defined on tensor elements")
        for key, right in self.payload:
            yield left_unit(self.algebra.left, key), right

    def flatten(self) -> np.ndarray:
        """Dense matrix (Kronecker form for Matrix (x) Matrix)."""
        if self.algebra.is_matrix:
            return np.array(self.payload)
        if not self.algebra.is_matrix_product:
            raise TypeError(f"{self.algebra.label} cannot be flattened")
        n, m = self.algebra.left.n, self.algebra.right.n
        out = np.zeros((n * m, n * m), dtype=complex)
        for (a, b), right in self.payload:
            out[a * m:(a + 1) * m, b * m:(b + 1) * m] += right.payload
        return out

    def evaluate(self, point: Sequence[float]) -> complex:
        """Point evaluation on commutative phase-space algebras."""
        if self.algebra.is_polynomial:
            return self.payload.evaluate(point)
        if self.algebra.is_tensor and self.algebra.left.is_polynomial and self.algebra.right.is_polynomial:
            k = self.algebra.left.nvars
            left_pt, right_pt = point[:k], point[k:]
            total = 0j
            for key, right in self.payload:
                mono = Polynomial.monomial(key)
                total += mono.evaluate(left_pt) * right.payload.evaluate(right_pt)
            return total
        raise TypeError(f"{self.algebra.label} elements are not functions on phase space")

    def __repr__(self) -> str:
        if self.algebra.is_matrix:
            return f"AlgebraElement({self.algebra.label}, {np.round(self.payload, 6).tolist()})"
        if self.algebra.is_polynomial:
            return f"AlgebraElement({self.algebra.label}, {self.payload!r})"
        inner = ", ".join(f"{k}->{r!r}" for k, r in self.payload)
        return f"AlgebraElement({self.algebra.label}, [{inner}])"


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def zero(algebra: AlgebraDescriptor) -> AlgebraElement:
    if algebra.is_matrix:
        return AlgebraElement(algebra, np.zeros((algebra.n, algebra.n), dtype=complex))
    if algebra.is_polynomial:
        return AlgebraElement(algebra, Polynomial(algebra.nvars))
    return AlgebraElement(algebra, ())


def scalar(algebra: AlgebraDescriptor, z: Scalar) -> AlgebraElement:
    """z times the unit element."""
    if algebra.is_matrix:
        return AlgebraElement(algebra, complex(z) * np.eye(algebra.n, dtype=complex))
    if algebra.is_polynomial:
        return AlgebraElement(algebra, Polynomial.constant(algebra.nvars, z))
    return tensor_element(unit(algebra.left), scalar(algebra.right, z), algebra)


def unit(algebra: AlgebraDescriptor) -> AlgebraElement:
    return scalar(algebra, 1.0)


def matrix_element(algebra: AlgebraDescriptor, values) -> AlgebraElement:
    return AlgebraElement(algebra, np.asarray(values, dtype=complex))


def polynomial_element(algebra: AlgebraDescriptor, terms: Dict[Tuple[int, ...], complex]) -> AlgebraElement:
    return AlgebraElement(algebra, Polynomial(algebra.nvars, terms))


def coordinate(algebra: AlgebraDescriptor, index: int) -> AlgebraElement:
    """The coordinate function ξ^index (q's first, then p's)."""
    return AlgebraElement(algebra, Polynomial.variable(algebra.nvars, index))


def q(algebra: AlgebraDescriptor, j: int = 1) -> AlgebraElement:
    return coordinate(algebra, j - 1)


def p(algebra: AlgebraDescriptor, j: int = 1) -> AlgebraElement:
    return coordinate(algebra, algebra.n + j - 1)


def left_unit(left: AlgebraDescriptor, key: LeftKey) -> AlgebraElement:
    if left.is_matrix:
        arr = np.zeros((left.n, left.n), dtype=complex)
        arr[key[0], key[1]] = 1.0
        return AlgebraElement(left, arr)
    return AlgebraElement(left, Polynomial.monomial(key))


def decompose_left(element: AlgebraElement) -> List[Tuple[LeftKey, complex]]:
    """Coordinates of a factor element in its unit basis."""
    if element.algebra.is_matrix:
        rows, cols = np.nonzero(element.payload)
        return [((int(a), int(b)), complex(element.payload[a, b])) for a, b in zip(rows, cols)]
    if element.algebra.is_polynomial:
        return list(element.payload.items())
    raise TypeError("tensor factors must be matrix or polynomial elements")


def _tensor_from_units(algebra: AlgebraDescriptor, acc: Dict[LeftKey, AlgebraElement]) -> AlgebraElement:
    pairs = tuple(sorted(((k, r) for k, r in acc.items() if r.norm() != 0.0), key=lambda kr: kr[0]))
    return AlgebraElement(algebra, pairs)


def tensor_from_pairs(
    algebra: AlgebraDescriptor,
    pairs: Iterable[Tuple[AlgebraElement, AlgebraElement]],
) -> AlgebraElement:
    """Canonical tensor element of a finite sum of simple tensors."""
    acc: Dict[LeftKey, AlgebraElement] = {}
    for left, right in pairs:
        if left.algebra != algebra.left or right.algebra != algebra.right:
            raise AlgebraMismatch(
                f"pair ({left.algebra.label}, {right.algebra.label}) not in {algebra.label}",
                {"algebra": algebra.label},
            )
        for key, c in decompose_left(left):
            term = right.scale(c)
            acc[key] = acc[key] + term if key in acc else term
    return _tensor_from_units(algebra, acc)


def tensor_element(
    a: AlgebraElement,
    b: AlgebraElement,
    algebra: AlgebraDescriptor | None = None,
) -> AlgebraElement:
    """a (x) b in Tensor(a.algebra, b.algebra)."""
    from .descriptors import tensor_algebra

    if algebra is None:
        algebra = tensor_algebra(a.algebra, b.algebra)
    return tensor_from_pairs(algebra, [(a, b)])


def embed_left(a: AlgebraElement, algebra: AlgebraDescriptor) -> AlgebraElement:
    """Ξ⁽¹⁾(A) = A (x) I₂."""
    return tensor_element(a, unit(algebra.right), algebra)


def embed_right(b: AlgebraElement, algebra: AlgebraDescriptor) -> AlgebraElement:
    """Ξ⁽²⁾(B) = I₁ (x) B."""
    return tensor_element(unit(algebra.left), b, algebra)


def from_flat(algebra: AlgebraDescriptor, matrix: np.ndarray) -> AlgebraElement:
    """Inverse of ``flatten`` for Matrix (x) Matrix (or identity for Matrix)."""
    if algebra.is_matrix:
        return AlgebraElement(algebra, matrix)
    if not algebra.is_matrix_product:
        raise TypeError(f"{algebra.label} has no flat representation")
    n, m = algebra.left.n, algebra.right.n
    acc = {}
    for a in range(n):
        for b in range(n):
            block = matrix[a * m:(a + 1) * m, b * m:(b + 1) * m]
            if np.any(block != 0):
                acc[(a, b)] = AlgebraElement(algebra.right, block)
    return _tensor_from_units(algebra, acc)


def lift_pairwise(element: AlgebraElement, left_map, right_map) -> AlgebraElement:
    """Σ left_map(L) (x) right_map(R) over the canonical pairs of ``element``."""
    return tensor_from_pairs(
        element.algebra,
        [(left_map(left), right_map(right)) for left, right in element.pairs()],
    )
