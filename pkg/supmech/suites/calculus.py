"""Cartan-calculus identities on random forms and derivations."""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from ..algebra.descriptors import AlgebraDescriptor
from ..config import SupmechConfig
from ..derivations.basis import DerivationBasis, default_basis, random_derivation
from ..derivations.checks import check_derivation
from ..derivations.derivation import lie_bracket
from ..forms.calculus import (
    check_z_linearity,
    exterior_derivative,
    interior_product_or_zero,
    lie_derivative,
    wedge,
)
from ..forms.form import DifferentialForm, random_form
from ..models import FAIL, PASS, CaseResult
from ..serialization import form_to_json
from .base import SUITE_TOLERANCE, case_rng, relative, sub_seed, worst_case

ELEMENT_DEGREE = 2


def _degrees(basis: DerivationBasis) -> tuple:
    return (0, 1, 2) if basis.size <= 4 else (0, 1)


def _form(basis: DerivationBasis, rng: np.random.Generator, degree: int) -> DifferentialForm:
    return random_form(basis, min(degree, basis.size), rng, ELEMENT_DEGREE)


def _witness(payload) -> dict:
    return {"forms": [form_to_json(f) for f in payload]}


def _leibniz_case(basis: DerivationBasis, seed: int, tol: float, config: Optional[SupmechConfig]) -> CaseResult:
    """A random Z(A)-combination of the basis passes the Leibniz certification."""
    name = f"{basis.algebra.label}/derivation-leibniz"
    x = random_derivation(basis, case_rng(seed, name))
    calculus = config.calculus if config else None
    check = check_derivation(
        x,
        basis.algebra,
        seed=sub_seed(seed, name),
        random_pairs=calculus.leibniz_random_pairs if calculus else 20,
        min_pairs=calculus.leibniz_min_pairs if calculus else 50,
        tolerance=tol,
    )
    return CaseResult(
        name,
        PASS if check.is_derivation else FAIL,
        check.residual,
        tol,
        witness=None if check.is_derivation else check.to_dict(),
        details={"pairs_checked": check.pairs_checked, "basis": basis.kind},
    )


def run_calculus(
    algebra: AlgebraDescriptor,
    trials: int,
    seed: int,
    config: Optional[SupmechConfig] = None,
) -> List[CaseResult]:
    basis = default_basis(algebra)
    degrees = _degrees(basis)
    tol = max(SUITE_TOLERANCE, config.numerics.tolerance) if config else SUITE_TOLERANCE
    prefix = algebra.label

    def pick(k: int, lowest: int = 0) -> int:
        return max(lowest, degrees[k % len(degrees)])

    def lie_bracket_law(rng, k):
        x, y = random_derivation(basis, rng), random_derivation(basis, rng)
        alpha = _form(basis, rng, pick(k))
        lhs = lie_derivative(x, lie_derivative(y, alpha)) - lie_derivative(y, lie_derivative(x, alpha))
        return relative(lhs, lie_derivative(lie_bracket(x, y), alpha)), (alpha,)

    def lie_wedge(rng, k):
        y = random_derivation(basis, rng)
        alpha, beta = _form(basis, rng, pick(k)), _form(basis, rng, 1)
        lhs = lie_derivative(y, wedge(alpha, beta))
        rhs = wedge(lie_derivative(y, alpha), beta) + wedge(alpha, lie_derivative(y, beta))
        return relative(lhs, rhs), (alpha, beta)

    def interior_anticommute(rng, k):
        x, y = random_derivation(basis, rng), random_derivation(basis, rng)
        alpha = _form(basis, rng, 2)
        lhs = interior_product_or_zero(x, interior_product_or_zero(y, alpha))
        rhs = interior_product_or_zero(y, interior_product_or_zero(x, alpha)).scale(-1.0)
        return relative(lhs, rhs), (alpha,)

    def interior_wedge(rng, k):
        x = random_derivation(basis, rng)
        p = pick(k)
        alpha, beta = _form(basis, rng, p), _form(basis, rng, 1)
        lhs = interior_product_or_zero(x, wedge(alpha, beta))
        rhs = wedge(interior_product_or_zero(x, alpha), beta) if p > 0 else DifferentialForm(p, basis)
        rhs = rhs + wedge(alpha, interior_product_or_zero(x, beta)).scale((-1.0) ** p)
        return relative(lhs, rhs), (alpha, beta)

    def lie_interior(rng, k):
        x, y = random_derivation(basis, rng), random_derivation(basis, rng)
        alpha = _form(basis, rng, pick(k, 1))
        lhs = lie_derivative(x, interior_product_or_zero(y, alpha)) - interior_product_or_zero(y, lie_derivative(x, alpha))
        return relative(lhs, interior_product_or_zero(lie_bracket(x, y), alpha)), (alpha,)

    def cartan(rng, k):
        x = random_derivation(basis, rng)
        alpha = _form(basis, rng, pick(k))
        d_alpha = exterior_derivative(alpha)
        lhs = interior_product_or_zero(x, d_alpha)
        if alpha.degree > 0:
            lhs = lhs + exterior_derivative(interior_product_or_zero(x, alpha))
        return relative(lhs, lie_derivative(x, alpha)), (alpha,)

    def d_lie(rng, k):
        y = random_derivation(basis, rng)
        alpha = _form(basis, rng, pick(k))
        lhs = exterior_derivative(lie_derivative(y, alpha))
        return relative(lhs, lie_derivative(y, exterior_derivative(alpha))), (alpha,)

    def d_squared(rng, k):
        alpha = _form(basis, rng, pick(k))
        dd = exterior_derivative(exterior_derivative(alpha))
        return dd.norm() / max(1.0, alpha.norm()), (alpha,)

    def graded_leibniz(rng, k):
        p = pick(k)
        alpha, beta = _form(basis, rng, p), _form(basis, rng, 1)
        lhs = exterior_derivative(wedge(alpha, beta))
        rhs = wedge(exterior_derivative(alpha), beta) + wedge(alpha, exterior_derivative(beta)).scale((-1.0) ** p)
        return relative(lhs, rhs), (alpha, beta)

    def z_linear(rng, k):
        alpha = _form(basis, rng, pick(k))
        d_alpha = exterior_derivative(alpha)
        if d_alpha.degree > basis.size:
            return 0.0, None
        residual = check_z_linearity(d_alpha.evaluate, basis, d_alpha.degree, seed=int(rng.integers(2**31)), trials=3)
        return residual / max(1.0, d_alpha.norm()), (alpha,)

    cases = [_leibniz_case(basis, seed, tol, config)]
    checks = [
        ("lie-bracket-homomorphism", lie_bracket_law),
        ("lie-wedge-leibniz", lie_wedge),
        ("interior-anticommute", interior_anticommute),
        ("interior-wedge", interior_wedge),
        ("lie-interior-commutator", lie_interior),
        ("cartan-formula", cartan),
        ("d-lie-commute", d_lie),
        ("d-squared", d_squared),
        ("d-graded-leibniz", graded_leibniz),
        ("z-linearity-closure", z_linear),
    ]
    cases.extend(
        worst_case(f"{prefix}/{name}", trials, seed, fn, tol, _witness, {"basis": basis.kind})
        for name, fn in checks
    )
    return cases
