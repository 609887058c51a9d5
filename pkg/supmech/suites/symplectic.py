"""Poisson-bracket laws and form identities for the standard structures."""

from __future__ import annotations

from typing import Iterable, List, Optional, Tuple

from ..algebra.descriptors import AlgebraDescriptor
from ..algebra.elements import AlgebraElement, p, q, unit
from ..algebra.operations import commutator
from ..algebra.polynomial import Polynomial
from ..algebra.sampling import random_element
from ..config import SupmechConfig
from ..derivations.derivation import InnerDerivation
from ..errors import AlgebraMismatch
from ..forms.calculus import exterior_derivative, form_star, interior_product, lie_derivative
from ..forms.form import DifferentialForm
from ..models import CaseResult
from ..symplectic.morphisms import UnitaryConjugation, rotation
from ..symplectic.structures import (
    CANONICAL,
    CLASSICAL,
    QUANTUM,
    SymplecticStructure,
    canonical_structure,
    classical_form,
    hamiltonian_derivation,
    mixed_structure,
    poisson_bracket,
    quantum_form,
    verify_symplectic,
)
from ..symplectic.transformations import canonical_residual, exterior_power_residual
from .base import SUITE_TOLERANCE, elements_witness, relative, worst_case

HBARS = (0.5, 1.0, 2.0)
ELEMENT_DEGREE = 2


def standard_structures(algebra: AlgebraDescriptor, hbar: float = 1.0) -> List[Tuple[str, SymplecticStructure]]:
    """Named structures a suite runs against on *algebra*."""
    if algebra.is_matrix:
        out = [(CANONICAL, canonical_structure(algebra))]
        hbars = sorted(set(HBARS) | {hbar})
        out += [(f"{QUANTUM}-hbar={h:g}", quantum_form(algebra, h)) for h in hbars]
        return out
    if algebra.is_polynomial:
        return [(CLASSICAL, classical_form(algebra))]
    if algebra.is_tensor and algebra.left.is_polynomial and algebra.right.is_matrix:
        return [(f"mixed-hbar={hbar:g}", mixed_structure(algebra, -1j * hbar))]
    raise AlgebraMismatch(
        f"no standard structure on {algebra.label}; use the tensor suite for product algebras",
        {"algebra": algebra.label},
    )


def _element_degree(algebra: AlgebraDescriptor) -> int:
    return 1 if algebra.is_tensor else ELEMENT_DEGREE


def _classical_formula(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """Σⱼ ∂f/∂pⱼ ∂g/∂qʲ − ∂f/∂qʲ ∂g/∂pⱼ."""
    n = f.algebra.n
    fp, gp = f.polynomial, g.polynomial
    total = Polynomial(f.algebra.nvars)
    for j in range(n):
        total = total + fp.derivative(n + j) * gp.derivative(j) - fp.derivative(j) * gp.derivative(n + j)
    return AlgebraElement(f.algebra, total)


def _structure_cases(
    label: str,
    structure: SymplecticStructure,
    trials: int,
    seed: int,
    tol: float,
) -> Iterable[CaseResult]:
    algebra = structure.algebra
    deg = _element_degree(algebra)
    name = f"{algebra.label}/{label}"

    def herm(rng):
        return random_element(algebra, rng, deg, hermitian=True)

    def pb(a, b):
        return poisson_bracket(structure, a, b)

    def leibniz(rng, k):
        a, b, c = herm(rng), herm(rng), herm(rng)
        return relative(pb(a, b * c), pb(a, b) * c + b * pb(a, c)), (a, b, c)

    def jacobi(rng, k):
        a, b, c = herm(rng), herm(rng), herm(rng)
        j = pb(a, pb(b, c)) + pb(b, pb(c, a)) + pb(c, pb(a, b))
        scale = max(1.0, a.norm() * b.norm() * c.norm())
        return j.norm() / scale, (a, b, c)

    def homomorphism(rng, k):
        a, b, e = herm(rng), herm(rng), herm(rng)
        ya, yb = hamiltonian_derivation(structure, a), hamiltonian_derivation(structure, b)
        lhs = ya.apply(yb.apply(e)) - yb.apply(ya.apply(e))
        return relative(lhs, hamiltonian_derivation(structure, pb(a, b)).apply(e)), (a, b, e)

    def antisymmetry(rng, k):
        a, b = herm(rng), herm(rng)
        return (pb(a, b) + pb(b, a)).norm() / max(1.0, pb(a, b).norm()), (a, b)

    report = verify_symplectic(structure)
    yield CaseResult.measure(
        f"{name}/closed", report.closed_residual / max(1.0, structure.form.norm()), tol,
        details=report.to_dict(),
    )
    yield CaseResult.measure(
        f"{name}/nondegenerate", 0.0 if report.nondegenerate else 1.0, 0.0,
        witness={"reason": report.reason}, details=report.to_dict(),
    )
    for case, fn in (
        ("leibniz", leibniz),
        ("jacobi", jacobi),
        ("homomorphism", homomorphism),
        ("antisymmetry", antisymmetry),
    ):
        yield worst_case(f"{name}/{case}", trials, seed, fn, tol, elements_witness)

    if structure.parameter is not None and algebra.is_matrix:
        b = structure.parameter

        def commutator_formula(rng, k):
            x, y = herm(rng), herm(rng)
            return relative(pb(x, y), commutator(x, y).scale(1.0 / b)), (x, y)

        yield worst_case(f"{name}/commutator-formula", trials, seed, commutator_formula, tol, elements_witness)

    if structure.kind == CLASSICAL:
        def classical_formula(rng, k):
            f, g = herm(rng), herm(rng)
            return relative(pb(f, g), _classical_formula(f, g)), (f, g)

        yield worst_case(f"{name}/coordinate-formula", trials, seed, classical_formula, tol, elements_witness)
        worst = max((pb(p(algebra, j), q(algebra, j)) - unit(algebra)).norm() for j in range(1, algebra.n + 1))
        yield CaseResult.measure(f"{name}/p-q-bracket", worst, tol)


def _canonical_cases(algebra: AlgebraDescriptor, trials: int, seed: int, tol: float) -> Iterable[CaseResult]:
    structure = canonical_structure(algebra)
    omega = structure.form
    basis = structure.basis
    name = f"{algebra.label}/canonical"

    yield CaseResult.measure(f"{name}/imaginary", (form_star(omega) + omega).norm(), tol)
    invariance = max(lie_derivative(basis[i], omega).norm() for i in range(basis.size))
    yield CaseResult.measure(f"{name}/lie-invariance", invariance, tol)

    def interior(rng, k):
        a = random_element(algebra, rng)
        lhs = interior_product(InnerDerivation(a), omega)
        rhs = exterior_derivative(DifferentialForm.function(a, basis)).scale(-1.0)
        return relative(lhs, rhs), (a,)

    yield worst_case(f"{name}/interior-inner", trials, seed, interior, tol, elements_witness)

    def conjugation(rng, k):
        g = random_element(algebra, rng, hermitian=True)
        phi = UnitaryConjugation.exponential(g, 0.7)
        return canonical_residual(phi, structure) / max(1.0, omega.norm()), (g,)

    yield worst_case(f"{name}/inner-automorphism", max(1, trials // 10), seed, conjugation, tol, elements_witness)


def run_symplectic(
    algebra: AlgebraDescriptor,
    trials: int,
    seed: int,
    config: Optional[SupmechConfig] = None,
) -> List[CaseResult]:
    tol = max(SUITE_TOLERANCE, config.numerics.tolerance) if config else SUITE_TOLERANCE
    hbar = config.physics.hbar if config else 1.0
    cases: List[CaseResult] = []
    for label, structure in standard_structures(algebra, hbar):
        cases.extend(_structure_cases(label, structure, trials, seed, tol))
        if structure.kind == QUANTUM:
            real = form_star(structure.form).distance(structure.form)
            cases.append(CaseResult.measure(f"{algebra.label}/{label}/real", real, tol))
    if algebra.is_matrix:
        cases.extend(_canonical_cases(algebra, trials, seed, tol))
    if algebra.is_polynomial:
        structure = classical_form(algebra)
        phi = rotation(algebra)
        cases.append(CaseResult.measure(f"{algebra.label}/classical/rotation", canonical_residual(phi, structure), tol))
        if algebra.n >= 2:
            cases.append(CaseResult.measure(
                f"{algebra.label}/classical/rotation-exterior-power",
                exterior_power_residual(phi, structure), tol,
            ))
    return cases
