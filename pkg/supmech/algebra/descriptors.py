"""Algebra descriptors: which *-algebra an element lives in."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

DEFAULT_TOLERANCE = 1e-10

MATRIX = "matrix"
POLYNOMIAL = "polynomial"
TENSOR = "tensor"


@dataclass(frozen=True)
class AlgebraDescriptor:
    """Matrix(n), Polynomial(n pairs) or Tensor(left, right).

    ``tolerance`` is the threshold of norm-based element equality; it does
    not take part in descriptor equality.
    """
    kind: str
    n: int = 0
    left: Optional["AlgebraDescriptor"] = None
    right: Optional["AlgebraDescriptor"] = None
    tolerance: float = field(default=DEFAULT_TOLERANCE, compare=False)

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.kind in (MATRIX, POLYNOMIAL):
            if self.n < 1:
                raise ValueError(f"{self.kind} algebra needs n >= 1, got {self.n}")
        elif self.kind == TENSOR:
            if self.left is None or self.right is None:
                raise ValueError("tensor algebra needs both factors")
            if self.left.kind == TENSOR or self.right.kind == TENSOR:
                raise ValueError("nested tensor products are not supported")
        else:
            raise ValueError(f"unknown algebra kind: {self.kind}")

    # -- classification ------------------------------------------------------

    @property
    def is_matrix(self) -> bool:
        return self.kind == MATRIX

    @property
    def is_polynomial(self) -> bool:
        return self.kind == POLYNOMIAL

    @property
    def is_tensor(self) -> bool:
        return self.kind == TENSOR

    @property
    def is_commutative(self) -> bool:
        if self.kind == MATRIX:
            return self.n == 1
        if self.kind == POLYNOMIAL:
            return True
        return self.left.is_commutative and self.right.is_commutative

    @property
    def is_matrix_product(self) -> bool:
        """Tensor of two matrix factors (flattens to Matrix(n*m))."""
        return self.kind == TENSOR and self.left.is_matrix and self.right.is_matrix

    @property
    def nvars(self) -> int:
        """Number of phase-space coordinates (2n) of a polynomial algebra."""
        if self.kind == POLYNOMIAL:
            return 2 * self.n
        if self.kind == TENSOR and self.left.is_polynomial and self.right.is_polynomial:
            return self.left.nvars + self.right.nvars
        raise ValueError(f"{self.label} has no phase-space coordinates")

    @property
    def flat_dim(self) -> int:
        if self.kind == MATRIX:
            return self.n
        if self.is_matrix_product:
            return self.left.n * self.right.n
        raise ValueError(f"{self.label} is not a matrix algebra")

    @property
    def label(self) -> str:
        if self.kind == MATRIX:
            return f"matrix:{self.n}"
        if self.kind == POLYNOMIAL:
            return f"poly:{self.n}"
        return f"{self.left.label}*{self.right.label}"

    def with_tolerance(self, tolerance: float) -> "AlgebraDescriptor":
        left = self.left.with_tolerance(tolerance) if self.left else None
        right = self.right.with_tolerance(tolerance) if self.right else None
        return replace(self, tolerance=tolerance, left=left, right=right)

    def flattened(self) -> "AlgebraDescriptor":
        """Matrix(n*m) canonically identified with Matrix(n) (x) Matrix(m)."""
        return matrix_algebra(self.flat_dim, self.tolerance)


def matrix_algebra(n: int, tolerance: float = DEFAULT_TOLERANCE) -> AlgebraDescriptor:
    return AlgebraDescriptor(MATRIX, n, tolerance=tolerance)


def polynomial_algebra(n: int, tolerance: float = DEFAULT_TOLERANCE) -> AlgebraDescriptor:
    return AlgebraDescriptor(POLYNOMIAL, n, tolerance=tolerance)


def tensor_algebra(left: AlgebraDescriptor, right: AlgebraDescriptor) -> AlgebraDescriptor:
    tol = min(left.tolerance, right.tolerance)
    return AlgebraDescriptor(TENSOR, 0, left, right, tolerance=tol)


def parse_algebra_label(text: str, tolerance: float = DEFAULT_TOLERANCE) -> AlgebraDescriptor:
    """Parse ``matrix:2``, ``poly:1`` or ``matrix:2*matrix:2``."""
    text = text.strip()
    if "*" in text:
        left, right = text.split("*", 1)
        return tensor_algebra(
            parse_algebra_label(left, tolerance), parse_algebra_label(right, tolerance)
        )
    kind, _, size = text.partition(":")
    kind = kind.strip().lower()
    try:
        n = int(size)
    except ValueError:
        raise ValueError(f"bad algebra label: {text!r}") from None
    if kind in ("matrix", "m"):
        return matrix_algebra(n, tolerance)
    if kind in ("poly", "polynomial", "p"):
        return polynomial_algebra(n, tolerance)
    raise ValueError(f"bad algebra label: {text!r}")
