"""Pinned Jacobi cases for the three product brackets.

Each case fixes the factor structures and a triple of simple tensors:

    commutative  Poly(1) ⊗ Poly(1), classical ⊗ classical
    quantum      Matrix(2) ⊗ Matrix(2), quantum ħ ⊗ quantum ħ
    mixed        Poly(1) ⊗ Matrix(2), classical ⊗ quantum ħ

The mixed triple (q²⊗σx, p⊗σy, p⊗σx) has symmetrized jacobiator 2·(1⊗σy)
for ħ = 1.  The simpler triple (q⊗σx, p⊗σy, 1⊗σz) is not a witness: its
jacobiator vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

from ..algebra.descriptors import matrix_algebra, polynomial_algebra, tensor_algebra
from ..algebra.elements import AlgebraElement, p, q, tensor_element, unit
from ..algebra.matrices import pauli
from ..errors import AlgebraMismatch
from ..symplectic.structures import SymplecticStructure, classical_form, quantum_form
from .product import Bracket, generalized_mixed_pb, jacobiator, product_pb, symmetrized_pb
from .worlds import classify_worlds

COMMUTATIVE = "commutative"
QUANTUM = "quantum"
MIXED = "mixed"
CASES = (COMMUTATIVE, QUANTUM, MIXED)

PRODUCT_BRACKET = "product"
SYMMETRIZED_BRACKET = "symmetrized"
MIXED_BRACKET = "mixed"
BRACKETS = (PRODUCT_BRACKET, SYMMETRIZED_BRACKET, MIXED_BRACKET)

# numbered names accepted on the command line
BRACKET_ALIASES = {"eq81": PRODUCT_BRACKET, "eq82": SYMMETRIZED_BRACKET, "eq86": MIXED_BRACKET}
BRACKET_CHOICES = tuple(BRACKET_ALIASES) + BRACKETS


def canonical_bracket(name: str) -> str:
    name = BRACKET_ALIASES.get(name, name)
    if name not in BRACKETS:
        raise ValueError(f"unknown bracket {name!r}; choose from {', '.join(BRACKET_CHOICES)}")
    return name


@dataclass
class JacobiCase:
    name: str
    left: SymplecticStructure
    right: SymplecticStructure
    triple: Tuple[AlgebraElement, AlgebraElement, AlgebraElement]
    hbar: float = 1.0

    @property
    def algebra(self):
        return self.triple[0].algebra


@dataclass
class JacobiOutcome:
    case: str
    bracket: str
    jacobiator: AlgebraElement
    norm: float
    expect_zero: bool
    details: Dict = field(default_factory=dict)

    @property
    def as_expected(self) -> bool:
        tol = self.jacobiator.algebra.tolerance
        if self.expect_zero:
            return self.norm <= 1e3 * tol
        return self.norm > 1e3 * tol

    def to_dict(self) -> dict:
        from ..serialization import element_to_json

        return {
            "case": self.case,
            "bracket": self.bracket,
            "norm": self.norm,
            "expect_zero": self.expect_zero,
            "as_expected": self.as_expected,
            "jacobiator": element_to_json(self.jacobiator),
            "details": self.details,
        }


def jacobi_case(name: str, hbar: float = 1.0) -> JacobiCase:
    poly = polynomial_algebra(1)
    mat = matrix_algebra(2)
    if name == COMMUTATIVE:
        alg = tensor_algebra(poly, poly)
        qq, pp, one = q(poly), p(poly), unit(poly)
        triple = (
            tensor_element(qq, qq, alg),
            tensor_element(pp, pp, alg),
            tensor_element(qq * pp, one, alg),
        )
        return JacobiCase(name, classical_form(poly), classical_form(poly), triple, hbar)
    if name == QUANTUM:
        alg = tensor_algebra(mat, mat)
        sx, sy, sz = pauli(mat)
        triple = (
            tensor_element(sx, sy, alg),
            tensor_element(sy, sz, alg),
            tensor_element(sz, sx, alg),
        )
        return JacobiCase(name, quantum_form(mat, hbar), quantum_form(mat, hbar), triple, hbar)
    if name == MIXED:
        alg = tensor_algebra(poly, mat)
        sx, sy, _ = pauli(mat)
        qq, pp = q(poly), p(poly)
        triple = (
            tensor_element(qq * qq, sx, alg),
            tensor_element(pp, sy, alg),
            tensor_element(pp, sx, alg),
        )
        return JacobiCase(name, classical_form(poly), quantum_form(mat, hbar), triple, hbar)
    raise ValueError(f"unknown Jacobi case {name!r}; choose from {', '.join(CASES)}")


def bracket_for(bracket: str, case: JacobiCase, seed: int = 0) -> Bracket:
    """The named bracket on the case's product algebra.

    The product bracket classifies the worlds first and raises
    UnclassifiedWorld for the mixed case.  The generalized mixed bracket
    uses b = −iħ and exists only on Poly ⊗ Matrix.
    """
    if bracket == PRODUCT_BRACKET:
        classification = classify_worlds(case.left, case.right, seed=seed)
        return lambda u, v: product_pb(case.left, case.right, classification, u, v)
    if bracket == SYMMETRIZED_BRACKET:
        return lambda u, v: symmetrized_pb(case.left, case.right, u, v)
    if bracket == MIXED_BRACKET:
        alg = case.algebra
        if not (alg.left.is_polynomial and alg.right.is_matrix):
            raise AlgebraMismatch(f"the mixed bracket needs Poly*Matrix, case {case.name} is {alg.label}")
        b = -1j * case.hbar
        return lambda u, v: generalized_mixed_pb(b, u, v)
    raise ValueError(f"unknown bracket {bracket!r}; choose from {', '.join(BRACKETS)}")


def expected_zero(bracket: str, case: str) -> bool:
    return not (bracket == SYMMETRIZED_BRACKET and case == MIXED)


def run_jacobi(bracket: str, case: str, hbar: float = 1.0, seed: int = 0) -> JacobiOutcome:
    bracket = canonical_bracket(bracket)
    c = jacobi_case(case, hbar)
    fn = bracket_for(bracket, c, seed)
    u, v, w = c.triple
    j = jacobiator(fn, u, v, w)
    return JacobiOutcome(
        case, bracket, j, j.norm(), expected_zero(bracket, case),
        {"algebra": c.algebra.label, "hbar": hbar},
    )
