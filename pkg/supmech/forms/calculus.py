"""Cartan calculus on forms: wedge, d, Lie derivative, interior product,
involution and pull-back.

All operators are computed entry by entry on increasing basis tuples; the
bracket and star tables of the basis stand in for [Xᵢ, Xⱼ] and Xₖ*.
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, List, Optional

import numpy as np

from ..algebra.elements import AlgebraElement, zero
from ..derivations.basis import DerivationBasis
from ..derivations.derivation import Derivation
from ..derivations.pushforward import push_forward
from ..errors import AlgebraMismatch, DegreeZero, NotIsomorphism
from .form import DifferentialForm, Index, increasing_tuples, permutation_sign

REAL = "real"
IMAGINARY = "imaginary"
NEITHER = "neither"


def _shuffles(indices: Index, p: int):
    """(sign, first p, remaining) over (p, q)-shuffles of ``indices``."""
    n = len(indices)
    for chosen in itertools.combinations(range(n), p):
        rest = tuple(i for i in range(n) if i not in chosen)
        sign, _ = permutation_sign(chosen + rest)
        yield sign, tuple(indices[i] for i in chosen), tuple(indices[i] for i in rest)


def wedge(alpha: DifferentialForm, beta: DifferentialForm) -> DifferentialForm:
    """(α∧β)(X₁..X_{p+q}) = Σ_shuffles sgn(σ) α(X_σ…) β(X_σ…), α-value on the left."""
    alpha.basis.check_compatible(beta.basis)
    p, q = alpha.degree, beta.degree
    entries: Dict[Index, AlgebraElement] = {}
    for idx in increasing_tuples(alpha.basis.size, p + q):
        total = zero(alpha.algebra)
        for sign, first, rest in _shuffles(idx, p):
            a = alpha.value(first)
            if a.norm() == 0.0:
                continue
            b = beta.value(rest)
            if b.norm() == 0.0:
                continue
            total = total + (a * b).scale(sign)
        entries[idx] = total
    return DifferentialForm(p + q, alpha.basis, entries)


def exterior_derivative(alpha: DifferentialForm) -> DifferentialForm:
    """Koszul formula; (dA)(X) = X(A) in degree 0."""
    basis = alpha.basis
    p = alpha.degree
    entries: Dict[Index, AlgebraElement] = {}
    for idx in increasing_tuples(basis.size, p + 1):
        total = zero(alpha.algebra)
        for i, xi in enumerate(idx):
            rest = idx[:i] + idx[i + 1:]
            val = alpha.value(rest)
            if val.norm() > 0.0:
                term = basis[xi].apply(val)
                total = total + (term if i % 2 == 0 else term.scale(-1.0))
        for i in range(p + 1):
            for j in range(i + 1, p + 1):
                rest = tuple(idx[k] for k in range(p + 1) if k not in (i, j))
                sign = -1.0 if (i + j) % 2 else 1.0
                for k, c in enumerate(basis.bracket_coefficients(idx[i], idx[j])):
                    if c.norm() == 0.0:
                        continue
                    val = alpha.value((k,) + rest)
                    if val.norm() > 0.0:
                        total = total + (c * val).scale(sign)
        entries[idx] = total
    return DifferentialForm(p + 1, basis, entries)


def _bracket_with_basis(basis: DerivationBasis, y_coeffs, i: int) -> List[AlgebraElement]:
    """Coefficients of [Y, Xᵢ] = Σₖ (Kₖ[Xₖ, Xᵢ] − Xᵢ(Kₖ)Xₖ) for Y = Σ KₖXₖ."""
    out = [zero(basis.algebra) for _ in range(basis.size)]
    xi = basis[i]
    for k, kk in enumerate(y_coeffs):
        if kk.norm() == 0.0:
            continue
        for l, c in enumerate(basis.bracket_coefficients(k, i)):
            if c.norm() > 0.0:
                out[l] = out[l] + kk * c
        out[k] = out[k] - xi.apply(kk)
    return out


def lie_derivative(y: Derivation, alpha: DifferentialForm) -> DifferentialForm:
    """(L_Y α)(X…) = Y(α(X…)) − Σᵣ α(X₁, .., [Y, Xᵣ], .., X_p)."""
    basis = alpha.basis
    if y.algebra != basis.algebra:
        raise AlgebraMismatch(f"{y.algebra.label} derivation vs {basis.algebra.label} form")
    p = alpha.degree
    y_coeffs = basis.expand(y)
    brackets = [_bracket_with_basis(basis, y_coeffs, i) for i in range(basis.size)]
    entries: Dict[Index, AlgebraElement] = {}
    for idx in increasing_tuples(basis.size, p):
        val = alpha.value(idx)
        total = y.apply(val) if val.norm() > 0.0 else zero(alpha.algebra)
        for r, i in enumerate(idx):
            for l, c in enumerate(brackets[i]):
                if c.norm() == 0.0:
                    continue
                replaced = idx[:r] + (l,) + idx[r + 1:]
                v = alpha.value(replaced)
                if v.norm() > 0.0:
                    total = total - c * v
        entries[idx] = total
    return DifferentialForm(p, basis, entries)


def interior_product(x: Derivation, alpha: DifferentialForm) -> DifferentialForm:
    """(i_X α)(X₁..X_{p−1}) = α(X, X₁..X_{p−1}).

    i_X on a 0-form is zero by convention; it is reported as DegreeZero so
    callers decide explicitly.
    """
    if alpha.degree == 0:
        raise DegreeZero("interior product of a 0-form", {"convention": "i_X(A) = 0"})
    basis = alpha.basis
    coeffs = basis.expand(x)
    entries: Dict[Index, AlgebraElement] = {}
    for idx in increasing_tuples(basis.size, alpha.degree - 1):
        total = zero(alpha.algebra)
        for k, c in enumerate(coeffs):
            if c.norm() == 0.0:
                continue
            v = alpha.value((k,) + idx)
            if v.norm() > 0.0:
                total = total + c * v
        entries[idx] = total
    return DifferentialForm(alpha.degree - 1, basis, entries)


def interior_product_or_zero(x: Derivation, alpha: DifferentialForm) -> DifferentialForm:
    if alpha.degree == 0:
        return DifferentialForm(0, alpha.basis)
    return interior_product(x, alpha)


def form_star(alpha: DifferentialForm) -> DifferentialForm:
    """ω*(X₁..X_p) = [ω(X₁*, .., X_p*)]*."""
    basis = alpha.basis
    stars = [basis.star_coefficients(basis.unit_coefficients(k)) for k in range(basis.size)]
    entries: Dict[Index, AlgebraElement] = {}
    for idx in increasing_tuples(basis.size, alpha.degree):
        val = alpha.evaluate_coefficients([stars[i] for i in idx])
        entries[idx] = val.star()
    return DifferentialForm(alpha.degree, basis, entries)


def classify_reality(alpha: DifferentialForm, tolerance: Optional[float] = None) -> str:
    tol = alpha.algebra.tolerance if tolerance is None else tolerance
    starred = form_star(alpha)
    if starred.distance(alpha) <= tol:
        return REAL
    if (starred + alpha).norm() <= tol:
        return IMAGINARY
    return NEITHER


def pull_back(morphism, omega: DifferentialForm, source_basis: Optional[DerivationBasis] = None) -> DifferentialForm:
    """(Φ*ω)(X₁..X_p) = Φ⁻¹[ω(Φ_*X₁, .., Φ_*X_p)]."""
    if omega.algebra != morphism.target:
        raise NotIsomorphism(f"form lives on {omega.algebra.label}, morphism targets {morphism.target.label}")
    if source_basis is None:
        if not morphism.is_endomorphism:
            raise NotIsomorphism("a source basis is required for morphisms between different algebras")
        source_basis = omega.basis
    inverse = morphism.inverse()
    pushed = [omega.basis.expand(push_forward(morphism, x)) for x in source_basis.derivations]
    entries: Dict[Index, AlgebraElement] = {}
    for idx in increasing_tuples(source_basis.size, omega.degree):
        val = omega.evaluate_coefficients([pushed[i] for i in idx])
        entries[idx] = inverse.apply(val)
    return DifferentialForm(omega.degree, source_basis, entries)


def check_z_linearity(
    cochain: Callable[..., AlgebraElement],
    basis: DerivationBasis,
    degree: int,
    seed: int = 0,
    trials: int = 10,
) -> float:
    """Max ‖c(.., K·X, ..) − K·c(.., X, ..)‖ over random central K and basis slots."""
    from ..algebra.fibers import central_element

    if degree == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    algebra = basis.algebra
    worst = 0.0
    for _ in range(trials):
        idx = tuple(int(i) for i in rng.integers(0, basis.size, size=degree))
        slot = int(rng.integers(0, degree))
        if algebra.is_matrix or algebra.is_matrix_product:
            k = central_element(algebra, {(): complex(rng.normal(), rng.normal())})
        else:
            k = _random_central(algebra, rng)
        args = [basis[i] for i in idx]
        scaled = list(args)
        scaled[slot] = basis.combine([k if j == idx[slot] else zero(algebra) for j in range(basis.size)])
        worst = max(worst, (cochain(*scaled) - k * cochain(*args)).norm())
    return worst


def _random_central(algebra, rng):
    from ..algebra.fibers import central_element
    from ..algebra.polynomial import monomials_up_to

    if algebra.is_polynomial:
        keys = list(monomials_up_to(algebra.nvars, 2))
    elif algebra.left.is_polynomial and algebra.right.is_polynomial:
        keys = list(monomials_up_to(algebra.left.nvars + algebra.right.nvars, 2))
    else:
        side = algebra.left if algebra.left.is_polynomial else algebra.right
        keys = list(monomials_up_to(side.nvars, 2))
    return central_element(algebra, {k: complex(rng.normal()) for k in keys})
