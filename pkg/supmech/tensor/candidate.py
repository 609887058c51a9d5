"""Candidate operators on tensor algebras: sums of (leftOp ⊗ rightOp)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

from ..algebra.descriptors import AlgebraDescriptor
from ..algebra.elements import AlgebraElement, lift_pairwise, zero
from ..derivations.derivation import Derivation
from ..errors import AlgebraMismatch

FactorMap = Callable[[AlgebraElement], AlgebraElement]


@dataclass(frozen=True)
class DerivationOp:
    derivation: Derivation

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        return self.derivation.apply(a)

    def __repr__(self):
        return f"D[{self.derivation!r}]"


@dataclass(frozen=True)
class MultiplicationOp:
    """μ(C): a ↦ C·a."""
    element: AlgebraElement

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        return self.element * a

    def __repr__(self):
        return f"mu[{self.element!r}]"


Term = Tuple[complex, FactorMap, FactorMap]


class CandidateOperator:
    """Σ zₜ (Lₜ ⊗ Rₜ), acting on canonical tensor pairs term by term."""

    def __init__(self, algebra: AlgebraDescriptor, terms: Sequence[Term]):
        if not algebra.is_tensor:
            raise AlgebraMismatch(f"candidate operators act on tensor algebras, got {algebra.label}")
        self.algebra = algebra
        self.terms: List[Term] = [(complex(z), l, r) for z, l, r in terms]

    def apply(self, u: AlgebraElement) -> AlgebraElement:
        if u.algebra != self.algebra:
            raise AlgebraMismatch(f"operator on {self.algebra.label} applied to {u.algebra.label}")
        total = zero(self.algebra)
        for z, left, right in self.terms:
            if z == 0:
                continue
            total = total + lift_pairwise(u, left, right).scale(z)
        return total

    def __call__(self, u: AlgebraElement) -> AlgebraElement:
        return self.apply(u)

    def __add__(self, other: "CandidateOperator") -> "CandidateOperator":
        if other.algebra != self.algebra:
            raise AlgebraMismatch("candidate operators on different algebras")
        return CandidateOperator(self.algebra, self.terms + other.terms)

    def __repr__(self):
        return f"CandidateOperator({len(self.terms)} terms)"


class CertifiedDerivation(Derivation):
    """A candidate operator that passed the Leibniz check."""

    def __init__(self, operator: CandidateOperator):
        self.algebra = operator.algebra
        self.operator = operator

    def _apply(self, a):
        return self.operator.apply(a)
