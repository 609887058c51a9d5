"""Push-forward of derivations along *-isomorphisms: (Φ*X)(B) = Φ(X(Φ⁻¹B))."""

from __future__ import annotations

from ..algebra.elements import coordinate
from ..errors import NotIsomorphism
from ..symplectic.morphisms import (
    AlgebraMorphism,
    IdentityMorphism,
    PolynomialSubstitution,
    UnitaryConjugation,
)
from .derivation import Derivation, InnerDerivation, VectorField, ZeroDerivation


class PushedDerivation(Derivation):
    def __init__(self, morphism: AlgebraMorphism, x: Derivation):
        self.algebra = morphism.target
        self.morphism = morphism
        self.inverse = morphism.inverse()
        self.x = x

    def _apply(self, b):
        return self.morphism.apply(self.x.apply(self.inverse.apply(b)))


def push_forward(morphism: AlgebraMorphism, x: Derivation) -> Derivation:
    if x.algebra != morphism.source:
        raise NotIsomorphism(
            f"morphism source {morphism.source.label} does not carry a {x.algebra.label} derivation"
        )
    if isinstance(morphism, IdentityMorphism):
        return x
    if isinstance(x, ZeroDerivation):
        return ZeroDerivation(morphism.target)
    if isinstance(morphism, UnitaryConjugation) and isinstance(x, InnerDerivation):
        # Φ D_A Φ⁻¹ = D_Φ(A)
        return InnerDerivation(morphism.apply(x.generator))
    pushed = PushedDerivation(morphism, x)
    if isinstance(morphism, PolynomialSubstitution) and isinstance(x, VectorField):
        algebra = morphism.target
        components = [pushed.apply(coordinate(algebra, a)).polynomial for a in range(algebra.nvars)]
        return VectorField(algebra, components, x.max_degree)
    return pushed
