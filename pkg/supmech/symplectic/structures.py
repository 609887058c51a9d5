"""Symplectic structures, Hamiltonian derivations and Poisson brackets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..algebra.descriptors import AlgebraDescriptor
from ..algebra.elements import AlgebraElement, unit
from ..algebra.operations import commutator, hermitian_part_check
from ..derivations.basis import (
    DerivationBasis,
    coordinate_basis,
    default_basis,
    from_derivations,
    gellmann_basis,
    lifted_basis,
)
from ..derivations.derivation import RIGHT, Derivation
from ..errors import AlgebraMismatch, NotSpecial, SupmechError, UnsupportedForm, ZeroParameter
from ..forms.calculus import exterior_derivative
from ..forms.form import DifferentialForm, increasing_tuples
from .solver import DEFAULT_RANK_THRESHOLD, FormSolver

CANONICAL = "canonical"
QUANTUM = "quantum"
CLASSICAL = "classical"
CUSTOM = "custom"
GENERALIZED = "generalized"
MIXED = "mixed"


class SymplecticStructure:
    """A 2-form ω on a derivation space with its Hamiltonian solver.

    ``parameter`` is b for ω = b·ω_c (1 for canonical, −iħ for quantum) and
    None otherwise.  The solver is factorized at construction; a degenerate
    or unsupported form is recorded, and reported when a solve is attempted.
    """

    def __init__(
        self,
        form: DifferentialForm,
        kind: str = CUSTOM,
        parameter: Optional[complex] = None,
        hbar: Optional[float] = None,
        rank_threshold: float = DEFAULT_RANK_THRESHOLD,
    ):
        if form.degree != 2:
            raise UnsupportedForm(f"symplectic forms have degree 2, got {form.degree}")
        self.form = form
        self.basis: DerivationBasis = form.basis
        self.algebra: AlgebraDescriptor = form.algebra
        self.kind = kind
        self.parameter = parameter
        self.hbar = hbar
        self._solver: Optional[FormSolver] = None
        self._solver_error: Optional[SupmechError] = None
        try:
            self._solver = FormSolver(form, rank_threshold)
        except UnsupportedForm as exc:
            self._solver_error = exc

    @property
    def solver(self) -> FormSolver:
        if self._solver is None:
            raise self._solver_error
        return self._solver

    @property
    def is_quantum(self) -> bool:
        return self.kind == QUANTUM

    def hamiltonian_derivation(self, a: AlgebraElement) -> Derivation:
        return hamiltonian_derivation(self, a)

    def poisson_bracket(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        return poisson_bracket(self, a, b)

    def __repr__(self) -> str:
        extra = f", b={self.parameter}" if self.parameter is not None else ""
        return f"SymplecticStructure({self.kind}, {self.algebra.label}{extra})"


@dataclass
class HamiltonianSystem:
    """(algebra, ω, H) with H Hermitian."""
    structure: SymplecticStructure
    hamiltonian: AlgebraElement

    def __post_init__(self):
        if self.hamiltonian.algebra != self.structure.algebra:
            raise AlgebraMismatch(
                f"Hamiltonian in {self.hamiltonian.algebra.label}, structure on {self.structure.algebra.label}"
            )
        if not hermitian_part_check(self.hamiltonian):
            raise ValueError("Hamiltonian must be Hermitian")

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.structure.algebra

    @property
    def parameter(self) -> Optional[complex]:
        return self.structure.parameter

    def generator(self) -> Derivation:
        """Y_H, so that dA/dt = Y_H(A) = {H, A}."""
        return hamiltonian_derivation(self.structure, self.hamiltonian)


@dataclass
class SymplecticReport:
    closed_residual: float
    rank: Optional[int]
    dimension: int
    nondegenerate: bool
    kernel_dimension: Optional[int] = None
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "closed_residual": self.closed_residual,
            "rank": self.rank,
            "dimension": self.dimension,
            "nondegenerate": self.nondegenerate,
            "kernel_dimension": self.kernel_dimension,
            "reason": self.reason,
        }


# ---------------------------------------------------------------------------
# Standard forms
# ---------------------------------------------------------------------------

def canonical_form(algebra: AlgebraDescriptor, basis: Optional[DerivationBasis] = None) -> DifferentialForm:
    """ω_c(D_A, D_B) = [A, B] on a special algebra."""
    if algebra.is_commutative:
        raise NotSpecial(f"{algebra.label} is not special", {"algebra": algebra.label})
    basis = basis or default_basis(algebra)
    gens = basis.inner_generators()
    if gens is None:
        raise NotSpecial("the derivation basis is not made of inner derivations", {"basis": basis.kind})
    m = basis.size
    return DifferentialForm(
        2, basis, {(i, j): commutator(gens[i], gens[j]) for i, j in increasing_tuples(m, 2)}
    )


def canonical_structure(algebra: AlgebraDescriptor, basis: Optional[DerivationBasis] = None) -> SymplecticStructure:
    return SymplecticStructure(canonical_form(algebra, basis), CANONICAL, parameter=1.0)


def scaled_structure(
    b: complex,
    algebra: AlgebraDescriptor,
    basis: Optional[DerivationBasis] = None,
    kind: str = CUSTOM,
    hbar: Optional[float] = None,
) -> SymplecticStructure:
    """ω = b·ω_c."""
    if b == 0:
        raise ZeroParameter("b·ω_c with b = 0 is degenerate")
    return SymplecticStructure(canonical_form(algebra, basis).scale(b), kind, parameter=complex(b), hbar=hbar)


def quantum_form(algebra: AlgebraDescriptor, hbar: float = 1.0, basis: Optional[DerivationBasis] = None) -> SymplecticStructure:
    """ω_Q = −iħ·ω_c."""
    if hbar <= 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    if algebra.is_polynomial:
        raise NotSpecial(f"{algebra.label} is commutative; no quantum form", {"algebra": algebra.label})
    return scaled_structure(-1j * hbar, algebra, basis, QUANTUM, hbar)


def classical_form(algebra: AlgebraDescriptor) -> SymplecticStructure:
    """ω_cl = Σ dpⱼ ∧ dqʲ on coordinate fields."""
    if not algebra.is_polynomial:
        raise AlgebraMismatch(f"classical form needs a polynomial algebra, got {algebra.label}")
    basis = coordinate_basis(algebra)
    n = algebra.n
    one = unit(algebra)
    # ω(∂/∂pⱼ, ∂/∂qʲ) = 1, stored on the increasing pair (qʲ, pⱼ)
    entries = {(j, n + j): one.scale(-1.0) for j in range(n)}
    return SymplecticStructure(DifferentialForm(2, basis, entries), CLASSICAL, parameter=None)


def generalized_pair(
    algebra: AlgebraDescriptor,
    subalgebra: Sequence[Derivation],
    b: complex = 1.0,
    hbar: Optional[float] = None,
) -> SymplecticStructure:
    """(A, 𝒳, b·ω_c) with 𝒳 spanned by ``subalgebra`` (a Lie subalgebra of IDer).

    Raises NotLieSubalgebra when the generators do not close.
    """
    basis = from_derivations(algebra, subalgebra)
    return scaled_structure(b, algebra, basis, GENERALIZED, hbar)


def mixed_structure(algebra: AlgebraDescriptor, b: complex) -> SymplecticStructure:
    """(Poly ⊗ Matrix, IDer, b·ω_c): classical factors act as central parameters."""
    if b == 0:
        raise ZeroParameter("parameter b must be nonzero")
    if not (algebra.is_tensor and algebra.left.is_polynomial and algebra.right.is_matrix):
        raise AlgebraMismatch(f"mixed structure needs Poly*Matrix, got {algebra.label}")
    basis = lifted_basis(algebra, RIGHT, gellmann_basis(algebra.right))
    return SymplecticStructure(canonical_form(algebra, basis).scale(b), MIXED, parameter=complex(b))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def hamiltonian_derivation(structure: SymplecticStructure, a: AlgebraElement) -> Derivation:
    """The unique Y_A in the derivation space with i_{Y_A} ω = −dA."""
    if a.algebra != structure.algebra:
        raise AlgebraMismatch(f"{a.algebra.label} element vs {structure.algebra.label} structure")
    basis = structure.basis
    rhs = [x.apply(a).scale(-1.0) for x in basis.derivations]
    result = structure.solver.solve(rhs)
    return basis.combine(result.coefficients).simplify()


def poisson_bracket(structure: SymplecticStructure, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """{A, B} = ω(Y_A, Y_B) = Y_A(B)."""
    if b.algebra != structure.algebra:
        raise AlgebraMismatch(f"{b.algebra.label} element vs {structure.algebra.label} structure")
    return hamiltonian_derivation(structure, a).apply(b)


def verify_symplectic(structure: SymplecticStructure) -> SymplecticReport:
    closed = exterior_derivative(structure.form).norm()
    dim = structure.basis.size
    try:
        solver = structure.solver
    except UnsupportedForm as exc:
        return SymplecticReport(closed, None, dim, False, None, str(exc))
    reason = "" if solver.full_rank else f"kernel of dimension {solver.kernel_dimension}"
    return SymplecticReport(closed, solver.rank, dim, solver.full_rank, solver.kernel_dimension, reason)
