"""*-algebra isomorphisms: unitary conjugation and affine substitution."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from ..algebra.descriptors import AlgebraDescriptor
from ..algebra.elements import AlgebraElement, from_flat, unit
from ..algebra.polynomial import Polynomial
from ..algebra.sampling import random_element
from ..errors import AlgebraMismatch, NotIsomorphism


class AlgebraMorphism(ABC):
    """A unit-preserving *-isomorphism Φ: source → target."""

    source: AlgebraDescriptor
    target: AlgebraDescriptor

    @abstractmethod
    def _apply(self, a: AlgebraElement) -> AlgebraElement:
        ...

    @abstractmethod
    def inverse(self) -> "AlgebraMorphism":
        ...

    def apply(self, a: AlgebraElement) -> AlgebraElement:
        if a.algebra != self.source:
            raise AlgebraMismatch(
                f"morphism from {self.source.label} applied to {a.algebra.label}",
                {"source": self.source.label, "element": a.algebra.label},
            )
        return self._apply(a)

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        return self.apply(a)

    def compose(self, inner: "AlgebraMorphism") -> "AlgebraMorphism":
        """self ∘ inner."""
        return ComposedMorphism(self, inner)

    @property
    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def homomorphism_residual(self, seed: int = 0, samples: int = 10) -> float:
        """max of product, star and unit defects over random elements."""
        rng = np.random.default_rng(seed)
        worst = (self.apply(unit(self.source)) - unit(self.target)).norm()
        for _ in range(samples):
            a = random_element(self.source, rng)
            b = random_element(self.source, rng)
            worst = max(
                worst,
                (self.apply(a * b) - self.apply(a) * self.apply(b)).norm(),
                (self.apply(a.star()) - self.apply(a).star()).norm(),
            )
        return worst


class IdentityMorphism(AlgebraMorphism):
    def __init__(self, algebra: AlgebraDescriptor):
        self.source = self.target = algebra

    def _apply(self, a):
        return a

    def inverse(self):
        return self


class UnitaryConjugation(AlgebraMorphism):
    """Φ(A) = U A U*.

    Accepts a Matrix(n) unitary, or a (nm)×(nm) unitary on Matrix ⊗ Matrix
    acting through the Kronecker flattening.
    """

    def __init__(self, algebra: AlgebraDescriptor, u: np.ndarray):
        if not (algebra.is_matrix or algebra.is_matrix_product):
            raise NotIsomorphism(f"unitary conjugation needs a matrix algebra, got {algebra.label}")
        u = np.asarray(u, dtype=complex)
        dim = algebra.flat_dim
        if u.shape != (dim, dim):
            raise NotIsomorphism(f"unitary has shape {u.shape}, expected ({dim}, {dim})")
        defect = float(np.linalg.norm(u @ u.conj().T - np.eye(dim)))
        if defect > algebra.tolerance * max(1.0, dim):
            raise NotIsomorphism("matrix is not unitary", {"defect": defect})
        self.source = self.target = algebra
        self.u = u

    @classmethod
    def exponential(cls, generator: AlgebraElement, t: float, hbar: float = 1.0) -> "UnitaryConjugation":
        """Conjugation by exp(−i G t / ħ) for Hermitian G."""
        flat = generator.flatten()
        return cls(generator.algebra, scipy.linalg.expm(-1j * t / hbar * flat))

    def _apply(self, a):
        flat = a.flatten()
        return from_flat(self.source, self.u @ flat @ self.u.conj().T)

    def inverse(self):
        return UnitaryConjugation(self.source, self.u.conj().T)


class PolynomialSubstitution(AlgebraMorphism):
    """Φ(f) = f ∘ φ with the affine map φ(ξ) = Mξ + c."""

    def __init__(self, algebra: AlgebraDescriptor, matrix: np.ndarray, shift: Optional[Sequence[float]] = None):
        if not algebra.is_polynomial:
            raise NotIsomorphism(f"substitution needs a polynomial algebra, got {algebra.label}")
        nv = algebra.nvars
        m = np.asarray(matrix, dtype=float)
        if m.shape != (nv, nv):
            raise NotIsomorphism(f"substitution matrix has shape {m.shape}, expected ({nv}, {nv})")
        c = np.zeros(nv) if shift is None else np.asarray(shift, dtype=float)
        if abs(np.linalg.det(m)) <= algebra.tolerance:
            raise NotIsomorphism("affine map is not invertible", {"det": float(np.linalg.det(m))})
        self.source = self.target = algebra
        self.matrix = m
        self.shift = c
        self._images = [
            Polynomial(nv, {**{_unit_exp(nv, b): m[a, b] for b in range(nv) if m[a, b] != 0},
                            **({(0,) * nv: c[a]} if c[a] != 0 else {})})
            for a in range(nv)
        ]

    def _apply(self, f):
        return AlgebraElement(self.source, f.polynomial.substitute(self._images))

    def inverse(self):
        inv = np.linalg.inv(self.matrix)
        return PolynomialSubstitution(self.source, inv, -inv @ self.shift)

    def is_symplectic_matrix(self, tolerance: Optional[float] = None) -> bool:
        """Mᵀ J M = J with J the standard form in (q, p) order."""
        tol = self.source.tolerance if tolerance is None else tolerance
        n = self.source.n
        j = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
        return float(np.linalg.norm(self.matrix.T @ j @ self.matrix - j)) <= tol


class ComposedMorphism(AlgebraMorphism):
    """(outer ∘ inner)(a) = outer(inner(a))."""

    def __init__(self, outer: AlgebraMorphism, inner: AlgebraMorphism):
        if inner.target != outer.source:
            raise AlgebraMismatch(f"cannot compose {outer.source.label} after {inner.target.label}")
        self.outer = outer
        self.inner = inner
        self.source = inner.source
        self.target = outer.target

    def _apply(self, a):
        return self.outer.apply(self.inner.apply(a))

    def inverse(self):
        return ComposedMorphism(self.inner.inverse(), self.outer.inverse())


def _unit_exp(nv: int, b: int):
    exps = [0] * nv
    exps[b] = 1
    return tuple(exps)


def rotation(algebra: AlgebraDescriptor) -> PolynomialSubstitution:
    """(q, p) → (p, −q) in every degree of freedom."""
    n = algebra.n
    m = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    return PolynomialSubstitution(algebra, m)
