"""Two interacting systems on the tensor product of their algebras."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from ..algebra.descriptors import AlgebraDescriptor
from ..algebra.elements import AlgebraElement, embed_left, embed_right, tensor_element
from ..algebra.operations import hermitian_part_check
from ..errors import AlgebraMismatch, ForbiddenCoupling
from ..symplectic.structures import HamiltonianSystem
from ..tensor.candidate import CandidateOperator
from ..tensor.product import ProductStructure
from ..tensor.worlds import BOTH_QUANTUM, WorldClassification, classify_worlds

Interaction = Sequence[Tuple[AlgebraElement, AlgebraElement]]


@dataclass
class CoupledSystem:
    """H = H⁽¹⁾⊗I₂ + I₁⊗H⁽²⁾ + Σ Fᵢ⊗Gᵢ with the product Poisson structure."""
    left: HamiltonianSystem
    right: HamiltonianSystem
    product: ProductStructure
    hamiltonian: AlgebraElement
    classification: WorldClassification

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.product.algebra

    @property
    def parameter(self) -> Optional[complex]:
        # in the quantum world the product bracket is (−λ)⁻¹[u, v]
        if self.classification.verdict == BOTH_QUANTUM:
            return -self.classification.lam
        return None

    def generator(self) -> CandidateOperator:
        return self.product.hamiltonian_derivation(self.hamiltonian)

    def embed_left(self, a: AlgebraElement) -> AlgebraElement:
        return embed_left(a, self.algebra)

    def embed_right(self, b: AlgebraElement) -> AlgebraElement:
        return embed_right(b, self.algebra)


def coupled_system(
    left: HamiltonianSystem,
    right: HamiltonianSystem,
    interaction: Interaction = (),
    seed: int = 0,
) -> CoupledSystem:
    """Couple two systems; refused unless both worlds share one λ."""
    classification = classify_worlds(left.structure, right.structure, seed=seed)
    if not classification.permitted:
        raise ForbiddenCoupling(
            f"coupling {left.algebra.label} with {right.algebra.label} is not permitted: {classification.reason}",
            classification.to_dict(),
        )
    product = ProductStructure.from_classification(left.structure, right.structure, classification)
    algebra = product.algebra
    h = embed_left(left.hamiltonian, algebra) + embed_right(right.hamiltonian, algebra)
    for f, g in interaction:
        if f.algebra != left.algebra or g.algebra != right.algebra:
            raise AlgebraMismatch(
                f"interaction term {f.algebra.label}*{g.algebra.label} on {algebra.label}"
            )
        if not (hermitian_part_check(f) and hermitian_part_check(g)):
            raise ValueError("interaction factors must be Hermitian")
        h = h + tensor_element(f, g, algebra)
    return CoupledSystem(left, right, product, h, classification)
