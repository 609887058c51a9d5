"""Product 2-form, the product bracket and its companions.

Three brackets on A₁ ⊗ A₂ are compared:

    product      {A⊗B, C⊗D} = {A,C}⊗BD + AC⊗{B,D} + λ{A,C}⊗{B,D}
    symmetrized  {A⊗B, C⊗D} = {A,C}⊗(BD+DB)/2 + (AC+CA)/2⊗{B,D}
    mixed        {f⊗A, g⊗B} = b⁻¹ fg ⊗ [A,B]   on Poly ⊗ Matrix

Each is extended bilinearly over the canonical pairs of its arguments.
"""

from __future__ import annotations

from typing import Callable, Dict, Union

from ..algebra.elements import AlgebraElement, embed_left, embed_right, tensor_element, tensor_from_pairs, zero
from ..algebra.operations import anticommutator_half, commutator
from ..derivations.basis import product_basis
from ..errors import AlgebraMismatch, NonDegeneracyFailure, UnclassifiedWorld, ZeroParameter
from ..forms.form import DifferentialForm, increasing_tuples
from ..symplectic.structures import SymplecticStructure, hamiltonian_derivation, poisson_bracket, verify_symplectic
from .candidate import CandidateOperator, DerivationOp, MultiplicationOp

Bracket = Callable[[AlgebraElement, AlgebraElement], AlgebraElement]


def product_form(left: SymplecticStructure, right: SymplecticStructure) -> DifferentialForm:
    """ω = ω⁽¹⁾⊗I₂ + I₁⊗ω⁽²⁾ on the lifted product basis; cross entries vanish."""
    for side, s in (("left", left), ("right", right)):
        report = verify_symplectic(s)
        if not report.nondegenerate:
            raise NonDegeneracyFailure(f"{side} factor is not symplectic", report.to_dict())
    basis = product_basis(left.basis, right.basis)
    algebra = basis.algebra
    m1 = left.basis.size
    entries: Dict = {}
    for i, j in increasing_tuples(m1, 2):
        entries[(i, j)] = embed_left(left.form.value((i, j)), algebra)
    for i, j in increasing_tuples(right.basis.size, 2):
        entries[(m1 + i, m1 + j)] = embed_right(right.form.value((i, j)), algebra)
    return DifferentialForm(2, basis, entries)


def _check_factors(left: SymplecticStructure, right: SymplecticStructure, u: AlgebraElement, v: AlgebraElement) -> None:
    for w in (u, v):
        if not w.algebra.is_tensor or w.algebra.left != left.algebra or w.algebra.right != right.algebra:
            raise AlgebraMismatch(
                f"{w.algebra.label} is not {left.algebra.label}*{right.algebra.label}"
            )


def _lambda_value(lam) -> complex:
    from .worlds import INCONSISTENT, WorldClassification

    if isinstance(lam, WorldClassification):
        if lam.verdict == INCONSISTENT:
            raise UnclassifiedWorld(
                f"no product bracket exists: {lam.reason}", {"verdict": lam.verdict, "reason": lam.reason}
            )
        return lam.lam
    return complex(lam)


def product_pb(
    left: SymplecticStructure,
    right: SymplecticStructure,
    lam: Union[complex, "WorldClassification"],
    u: AlgebraElement,
    v: AlgebraElement,
) -> AlgebraElement:
    lam = _lambda_value(lam)
    _check_factors(left, right, u, v)
    algebra = u.algebra
    pairs = []
    for a, b in u.pairs():
        ya = hamiltonian_derivation(left, a)
        yb = hamiltonian_derivation(right, b)
        for c, d in v.pairs():
            ac = ya.apply(c)
            bd = yb.apply(d)
            pairs.append((ac, b * d))
            pairs.append((a * c, bd))
            if lam != 0:
                pairs.append((ac.scale(lam), bd))
    return tensor_from_pairs(algebra, pairs) if pairs else zero(algebra)


def symmetrized_pb(
    left: SymplecticStructure,
    right: SymplecticStructure,
    u: AlgebraElement,
    v: AlgebraElement,
) -> AlgebraElement:
    _check_factors(left, right, u, v)
    pairs = []
    for a, b in u.pairs():
        for c, d in v.pairs():
            pairs.append((poisson_bracket(left, a, c), anticommutator_half(b, d)))
            pairs.append((anticommutator_half(a, c), poisson_bracket(right, b, d)))
    return tensor_from_pairs(u.algebra, pairs) if pairs else zero(u.algebra)


def generalized_mixed_pb(b: complex, u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    """{fA, gB} = b⁻¹ fg [A, B] on Poly ⊗ Matrix."""
    if b == 0:
        raise ZeroParameter("the structure parameter b must be nonzero")
    algebra = u.algebra
    if not (algebra.is_tensor and algebra.left.is_polynomial and algebra.right.is_matrix):
        raise AlgebraMismatch(f"generalized mixed bracket needs Poly*Matrix, got {algebra.label}")
    if v.algebra != algebra:
        raise AlgebraMismatch(f"{u.algebra.label} vs {v.algebra.label}")
    inv = 1.0 / complex(b)
    pairs = [(f * g, commutator(x, y).scale(inv)) for f, x in u.pairs() for g, y in v.pairs()]
    return tensor_from_pairs(algebra, pairs) if pairs else zero(algebra)


def jacobiator(bracket: Bracket, u: AlgebraElement, v: AlgebraElement, w: AlgebraElement) -> AlgebraElement:
    """{u,{v,w}} + {v,{w,u}} + {w,{u,v}}."""
    return bracket(u, bracket(v, w)) + bracket(v, bracket(w, u)) + bracket(w, bracket(u, v))


def product_hamiltonian_candidate(
    left: SymplecticStructure,
    right: SymplecticStructure,
    lam: complex,
    a: AlgebraElement,
    b: AlgebraElement,
) -> CandidateOperator:
    """Y = Y_A⊗μ(B) + μ(A)⊗Y_B + λ·Y_A⊗Y_B for u = A⊗B."""
    from ..algebra.descriptors import tensor_algebra

    algebra = tensor_algebra(left.algebra, right.algebra)
    ya = DerivationOp(hamiltonian_derivation(left, a))
    yb = DerivationOp(hamiltonian_derivation(right, b))
    return CandidateOperator(
        algebra,
        [
            (1.0, ya, MultiplicationOp(b)),
            (1.0, MultiplicationOp(a), yb),
            (lam, ya, yb),
        ],
    )


class ProductStructure:
    """The Poisson structure of A₁ ⊗ A₂ in a permitted world."""

    def __init__(self, left: SymplecticStructure, right: SymplecticStructure, lam: complex):
        self.left = left
        self.right = right
        self.lam = complex(lam)
        from ..algebra.descriptors import tensor_algebra

        self.algebra = tensor_algebra(left.algebra, right.algebra)

    @classmethod
    def from_classification(cls, left, right, classification) -> "ProductStructure":
        return cls(left, right, _lambda_value(classification))

    def poisson_bracket(self, u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
        return product_pb(self.left, self.right, self.lam, u, v)

    def hamiltonian_derivation(self, u: AlgebraElement) -> CandidateOperator:
        """Σ over canonical pairs (A, B) of u of the product candidate Y_{A⊗B}."""
        total = CandidateOperator(self.algebra, [])
        for a, b in u.pairs():
            total = total + product_hamiltonian_candidate(self.left, self.right, self.lam, a, b)
        return total

    def embed(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        return tensor_element(a, b, self.algebra)

    def __repr__(self):
        return f"ProductStructure({self.algebra.label}, lambda={self.lam})"
