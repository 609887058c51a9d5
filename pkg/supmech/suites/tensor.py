"""World classification and product-bracket cases for a pair of factors."""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

from ..algebra.descriptors import AlgebraDescriptor, tensor_algebra
from ..algebra.sampling import random_element
from ..config import SupmechConfig
from ..errors import UnclassifiedWorld
from ..models import FAIL, PASS, CaseResult
from ..symplectic.structures import SymplecticStructure, classical_form, quantum_form
from ..tensor.product import generalized_mixed_pb, jacobiator, product_pb, symmetrized_pb
from ..tensor.witness import MIXED, MIXED_BRACKET, SYMMETRIZED_BRACKET, run_jacobi
from ..tensor.worlds import (
    BOTH_COMMUTATIVE,
    BOTH_QUANTUM,
    INCONSISTENT,
    ProductHamiltonian,
    WorldClassification,
    classify_worlds,
    solve_product_hamiltonian,
)
from .base import SUITE_TOLERANCE, case_rng, elements_witness, relative, sub_seed, worst_case

JACOBI_WITNESS_FACTOR = 1e3


def factor_structure(algebra: AlgebraDescriptor, hbar: float = 1.0) -> SymplecticStructure:
    """quantum ħ on matrix factors, classical on polynomial factors."""
    if algebra.is_polynomial:
        return classical_form(algebra)
    return quantum_form(algebra, hbar)


def expected_verdict(left: SymplecticStructure, right: SymplecticStructure) -> str:
    lc, rc = left.algebra.is_commutative, right.algebra.is_commutative
    if lc and rc:
        return BOTH_COMMUTATIVE
    if lc != rc:
        return INCONSISTENT
    if left.hbar is not None and right.hbar is not None and abs(left.hbar - right.hbar) > 1e-12:
        return INCONSISTENT
    return BOTH_QUANTUM


def product_hamiltonian_case(
    left: SymplecticStructure,
    right: SymplecticStructure,
    permitted: bool,
    seed: int,
    samples: int,
    rel_tol: float,
) -> CaseResult:
    name = "product-hamiltonian"
    rng = case_rng(seed, name)
    a = random_element(left.algebra, rng, 1, hermitian=True)
    b = random_element(right.algebra, rng, 1, hermitian=True)
    result = solve_product_hamiltonian(left, right, a, b, seed=sub_seed(seed, name), samples=samples, relative_tolerance=rel_tol)
    tol = max(left.algebra.tolerance, right.algebra.tolerance)
    if isinstance(result, ProductHamiltonian):
        return CaseResult(
            name, PASS, result.check.residual, tol,
            details={"lambda": [result.lam.real, result.lam.imag], "pairs_checked": result.check.pairs_checked},
            expected_failure=not permitted,
        )
    return CaseResult(
        name, FAIL, result.residual, tol,
        witness=result.to_dict(),
        details={"stage": result.stage},
        expected_failure=not permitted,
    )


def run_tensor(
    left_algebra: AlgebraDescriptor,
    right_algebra: AlgebraDescriptor,
    trials: int,
    seed: int,
    config: Optional[SupmechConfig] = None,
    hbar_right: Optional[float] = None,
) -> Tuple[List[CaseResult], Dict[str, Any]]:
    """Cases plus a details dict carrying the classification and λ."""
    tol = max(SUITE_TOLERANCE, config.numerics.tolerance) if config else SUITE_TOLERANCE
    hbar = config.physics.hbar if config else 1.0
    samples = config.suites.lambda_samples if config else 50
    rel_tol = config.numerics.lambda_relative_tolerance if config else 1e-8
    left = factor_structure(left_algebra, hbar)
    right = factor_structure(right_algebra, hbar if hbar_right is None else hbar_right)

    classification = classify_worlds(left, right, seed=sub_seed(seed, "classification"), samples=samples, relative_tolerance=rel_tol)
    expected = expected_verdict(left, right)
    cases: List[CaseResult] = [
        CaseResult.measure(
            "classification",
            0.0 if classification.verdict == expected else 1.0,
            0.0,
            witness=classification.to_dict(),
            details={"verdict": classification.verdict, "expected": expected},
        )
    ]
    details: Dict[str, Any] = {"classification": classification.to_dict()}

    if classification.verdict == BOTH_QUANTUM:
        target = 1j * left.hbar
        details["lambda"] = [classification.lam.real, classification.lam.imag]
        cases.append(CaseResult.measure(
            "lambda-equals-i-hbar",
            abs(classification.lam - target) / abs(target),
            rel_tol,
            witness={"lambda": [classification.lam.real, classification.lam.imag]},
        ))

    cases.append(product_hamiltonian_case(left, right, expected != INCONSISTENT, seed, samples, rel_tol))

    if classification.permitted:
        cases.extend(_permitted_cases(left, right, classification, trials, seed, tol))
    else:
        cases.extend(_forbidden_cases(left, right, classification, trials, seed, tol))
    return cases, details


def _permitted_cases(
    left: SymplecticStructure,
    right: SymplecticStructure,
    classification: WorldClassification,
    trials: int,
    seed: int,
    tol: float,
) -> List[CaseResult]:
    algebra = tensor_algebra(left.algebra, right.algebra)

    def elem(rng):
        return random_element(algebra, rng, 1, hermitian=True)

    def pb(u, v):
        return product_pb(left, right, classification, u, v)

    def agreement(rng, k):
        u, v = elem(rng), elem(rng)
        return relative(pb(u, v), symmetrized_pb(left, right, u, v)), (u, v)

    def jacobi(rng, k):
        u, v, w = elem(rng), elem(rng), elem(rng)
        j = jacobiator(pb, u, v, w)
        return j.norm() / max(1.0, u.norm() * v.norm() * w.norm()), (u, v, w)

    def leibniz(rng, k):
        u, v, w = elem(rng), elem(rng), elem(rng)
        return relative(pb(u, v * w), pb(u, v) * w + v * pb(u, w)), (u, v, w)

    return [
        worst_case("bracket-agreement", trials, seed, agreement, tol, elements_witness),
        worst_case("product-jacobi", trials, seed, jacobi, tol, elements_witness),
        worst_case("product-leibniz", trials, seed, leibniz, tol, elements_witness),
    ]


def _forbidden_cases(
    left: SymplecticStructure,
    right: SymplecticStructure,
    classification: WorldClassification,
    trials: int,
    seed: int,
    tol: float,
) -> List[CaseResult]:
    cases: List[CaseResult] = []
    algebra = tensor_algebra(left.algebra, right.algebra)
    one = random_element(algebra, case_rng(seed, "product-bracket-refused"), 1, hermitian=True)
    try:
        product_pb(left, right, classification, one, one)
        refused = False
    except UnclassifiedWorld:
        refused = True
    cases.append(CaseResult.measure(
        "product-bracket-refused", 0.0 if refused else 1.0, 0.0,
        witness={"classification": classification.to_dict()},
    ))

    if left.algebra.is_commutative == right.algebra.is_commutative:
        return cases

    hbar = (right if left.algebra.is_commutative else left).hbar or 1.0
    outcome = run_jacobi(SYMMETRIZED_BRACKET, MIXED, hbar, seed=sub_seed(seed, "mixed-jacobi"))
    cases.append(CaseResult.measure(
        "mixed-jacobi",
        outcome.norm,
        JACOBI_WITNESS_FACTOR * outcome.jacobiator.algebra.tolerance,
        witness=outcome.to_dict(),
        details={"bracket": SYMMETRIZED_BRACKET, "case": MIXED},
        expected_failure=True,
    ))
    pinned = run_jacobi(MIXED_BRACKET, MIXED, hbar)
    cases.append(CaseResult.measure(
        "generalized-mixed-jacobi-pinned", pinned.norm, tol, witness=pinned.to_dict(),
    ))

    poly, mat = (left.algebra, right.algebra) if left.algebra.is_commutative else (right.algebra, left.algebra)
    mixed_algebra = tensor_algebra(poly, mat)
    b = -1j * hbar

    def elem(rng):
        return random_element(mixed_algebra, rng, 1, hermitian=True)

    def mixed_jacobi(rng, k):
        u, v, w = elem(rng), elem(rng), elem(rng)
        j = jacobiator(lambda x, y: generalized_mixed_pb(b, x, y), u, v, w)
        return j.norm() / max(1.0, u.norm() * v.norm() * w.norm()), (u, v, w)

    def mixed_leibniz(rng, k):
        u, v, w = elem(rng), elem(rng), elem(rng)
        lhs = generalized_mixed_pb(b, u, v * w)
        rhs = generalized_mixed_pb(b, u, v) * w + v * generalized_mixed_pb(b, u, w)
        return relative(lhs, rhs), (u, v, w)

    cases.append(worst_case("generalized-mixed-jacobi", trials, seed, mixed_jacobi, tol, elements_witness))
    cases.append(worst_case("generalized-mixed-leibniz", trials, seed, mixed_leibniz, tol, elements_witness))
    return cases