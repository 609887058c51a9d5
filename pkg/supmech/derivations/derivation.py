"""Derivations: Leibniz-rule linear maps on an algebra.

Concrete variants are inner derivations D_g = [g, ·], polynomial vector
fields Σ Xᵃ ∂/∂ξᵃ, factor derivations lifted to a tensor product, and
Z(A)-combinations of basis derivations (see ``basis.CompositeDerivation``).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import List, Sequence, Tuple

import numpy as np

from ..algebra.descriptors import AlgebraDescriptor
from ..algebra.elements import AlgebraElement, lift_pairwise, zero
from ..algebra.operations import commutator
from ..algebra.polynomial import Polynomial
from ..algebra.sampling import unit_basis
from ..errors import AlgebraMismatch, NoInnerDerivations

DEFAULT_MAX_FIELD_DEGREE = 6

LEFT = "left"
RIGHT = "right"


class Derivation(ABC):
    """A linear map X with X(ab) = X(a)b + aX(b)."""

    algebra: AlgebraDescriptor

    @abstractmethod
    def _apply(self, a: AlgebraElement) -> AlgebraElement:
        ...

    def apply(self, a: AlgebraElement) -> AlgebraElement:
        if a.algebra != self.algebra:
            raise AlgebraMismatch(
                f"derivation on {self.algebra.label} applied to {a.algebra.label}",
                {"derivation": self.algebra.label, "element": a.algebra.label},
            )
        return self._apply(a)

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        return self.apply(a)

    def star(self) -> "Derivation":
        return StarDerivation(self)

    def scaled(self, z: complex) -> "Derivation":
        return DerivationSum(self.algebra, ((complex(z), self),))

    def distance(self, other: "Derivation", sample: Sequence[AlgebraElement] | None = None) -> float:
        """Max action difference over a spanning sample."""
        if other.algebra != self.algebra:
            raise AlgebraMismatch("derivations on different algebras")
        sample = sample if sample is not None else unit_basis(self.algebra)
        return max((self.apply(a) - other.apply(a)).norm() for a in sample)

    def is_close(self, other: "Derivation", tolerance: float | None = None) -> bool:
        tol = self.algebra.tolerance if tolerance is None else tolerance
        return self.distance(other) <= tol


class ZeroDerivation(Derivation):
    def __init__(self, algebra: AlgebraDescriptor):
        self.algebra = algebra

    def _apply(self, a):
        return zero(self.algebra)

    def star(self):
        return self

    def __repr__(self):
        return f"ZeroDerivation({self.algebra.label})"


class InnerDerivation(Derivation):
    """D_g(b) = [g, b].

    Matrix generators are stored trace-free, so g ↦ D_g is injective.
    """

    def __init__(self, generator: AlgebraElement):
        algebra = generator.algebra
        if algebra.is_commutative:
            raise NoInnerDerivations(
                f"all inner derivations of {algebra.label} vanish",
                {"algebra": algebra.label},
            )
        if algebra.is_matrix:
            n = algebra.n
            g = generator.matrix
            generator = AlgebraElement(algebra, g - (np.trace(g) / n) * np.eye(n))
        elif algebra.is_matrix_product:
            from ..algebra.elements import from_flat

            flat = generator.flatten()
            dim = flat.shape[0]
            generator = from_flat(algebra, flat - (np.trace(flat) / dim) * np.eye(dim))
        self.algebra = algebra
        self.generator = generator

    def _apply(self, a):
        return commutator(self.generator, a)

    def star(self):
        # (D_A)* = −D_{A*}
        return InnerDerivation(self.generator.star().scale(-1.0))

    def scaled(self, z):
        return InnerDerivation(self.generator.scale(z))

    def __repr__(self):
        return f"InnerDerivation({self.generator!r})"


class VectorField(Derivation):
    """Σ Xᵃ ∂/∂ξᵃ on a polynomial algebra."""

    def __init__(
        self,
        algebra: AlgebraDescriptor,
        components: Sequence[Polynomial],
        max_degree: int = DEFAULT_MAX_FIELD_DEGREE,
    ):
        if not algebra.is_polynomial:
            raise AlgebraMismatch(f"vector fields need a polynomial algebra, got {algebra.label}")
        components = tuple(components)
        if len(components) != algebra.nvars:
            raise ValueError(f"expected {algebra.nvars} components, got {len(components)}")
        for comp in components:
            if comp.degree() > max_degree:
                raise ValueError(
                    f"component degree {comp.degree()} exceeds the bound {max_degree}"
                )
        self.algebra = algebra
        self.components = components
        self.max_degree = max_degree

    @classmethod
    def coordinate(cls, algebra: AlgebraDescriptor, index: int) -> "VectorField":
        nv = algebra.nvars
        comps = [Polynomial(nv) for _ in range(nv)]
        comps[index] = Polynomial.constant(nv, 1.0)
        return cls(algebra, comps)

    def _apply(self, a):
        f = a.polynomial
        total = Polynomial(self.algebra.nvars)
        for idx, comp in enumerate(self.components):
            if len(comp):
                total = total + comp * f.derivative(idx)
        return AlgebraElement(self.algebra, total)

    def star(self):
        return VectorField(self.algebra, [c.conjugate() for c in self.components], self.max_degree)

    def scaled(self, z):
        return VectorField(self.algebra, [c.scale(z) for c in self.components], self.max_degree)

    def __repr__(self):
        return f"VectorField({list(self.components)})"


class LiftedDerivation(Derivation):
    """X̃⁽¹⁾(A ⊗ B) = X(A) ⊗ B, or X̃⁽²⁾(A ⊗ B) = A ⊗ X(B)."""

    def __init__(self, algebra: AlgebraDescriptor, side: str, inner: Derivation):
        factor = algebra.left if side == LEFT else algebra.right
        if side not in (LEFT, RIGHT):
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")
        if inner.algebra != factor:
            raise AlgebraMismatch(
                f"{side} factor is {factor.label}, derivation acts on {inner.algebra.label}"
            )
        self.algebra = algebra
        self.side = side
        self.inner = inner

    def _apply(self, a):
        if self.side == LEFT:
            return lift_pairwise(a, self.inner.apply, lambda r: r)
        return lift_pairwise(a, lambda l: l, self.inner.apply)

    def star(self):
        return LiftedDerivation(self.algebra, self.side, self.inner.star())

    def scaled(self, z):
        return LiftedDerivation(self.algebra, self.side, self.inner.scaled(z))

    def __repr__(self):
        return f"LiftedDerivation({self.side}, {self.inner!r})"


class DerivationSum(Derivation):
    """Σ zᵢ Xᵢ with complex scalars zᵢ."""

    def __init__(self, algebra: AlgebraDescriptor, terms: Sequence[Tuple[complex, Derivation]]):
        for _, d in terms:
            if d.algebra != algebra:
                raise AlgebraMismatch("summands act on different algebras")
        self.algebra = algebra
        self.terms = tuple((complex(z), d) for z, d in terms)

    def _apply(self, a):
        total = zero(self.algebra)
        for z, d in self.terms:
            if z != 0:
                total = total + d.apply(a).scale(z)
        return total

    def star(self):
        return DerivationSum(self.algebra, [(z.conjugate(), d.star()) for z, d in self.terms])


class BracketDerivation(Derivation):
    """[X, Y] = X∘Y − Y∘X evaluated by composition."""

    def __init__(self, x: Derivation, y: Derivation):
        self.algebra = x.algebra
        self.x = x
        self.y = y

    def _apply(self, a):
        return self.x.apply(self.y.apply(a)) - self.y.apply(self.x.apply(a))

    def star(self):
        return BracketDerivation(self.x.star(), self.y.star())


class StarDerivation(Derivation):
    """X*(A) = [X(A*)]*."""

    def __init__(self, x: Derivation):
        self.algebra = x.algebra
        self.x = x

    def _apply(self, a):
        return self.x.apply(a.star()).star()

    def star(self):
        return self.x


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def inner_derivation(g: AlgebraElement) -> InnerDerivation:
    return InnerDerivation(g)


def apply(x: Derivation, a: AlgebraElement) -> AlgebraElement:
    return x.apply(a)


def lie_bracket(x: Derivation, y: Derivation) -> Derivation:
    if x.algebra != y.algebra:
        raise AlgebraMismatch(f"{x.algebra.label} vs {y.algebra.label}")
    if isinstance(x, ZeroDerivation) or isinstance(y, ZeroDerivation):
        return ZeroDerivation(x.algebra)
    if isinstance(x, InnerDerivation) and isinstance(y, InnerDerivation):
        # [D_A, D_B] = D_[A,B]
        return InnerDerivation(commutator(x.generator, y.generator))
    if isinstance(x, VectorField) and isinstance(y, VectorField):
        nv = x.algebra.nvars
        comps: List[Polynomial] = []
        for a in range(nv):
            xa, ya = x.components[a], y.components[a]
            val = Polynomial(nv)
            for b in range(nv):
                if len(x.components[b]):
                    val = val + x.components[b] * ya.derivative(b)
                if len(y.components[b]):
                    val = val - y.components[b] * xa.derivative(b)
            comps.append(val)
        bound = max([x.max_degree, y.max_degree] + [c.degree() for c in comps])
        return VectorField(x.algebra, comps, bound)
    if isinstance(x, LiftedDerivation) and isinstance(y, LiftedDerivation):
        if x.side != y.side:
            return ZeroDerivation(x.algebra)
        return LiftedDerivation(x.algebra, x.side, lie_bracket(x.inner, y.inner))
    from .basis import CompositeDerivation

    if isinstance(x, CompositeDerivation) and isinstance(y, CompositeDerivation) and x.basis is y.basis:
        return x.basis.combine(x.basis.bracket_of_coefficients(x.coefficients, y.coefficients))
    return BracketDerivation(x, y)


def derivation_star(x: Derivation) -> Derivation:
    return x.star()
