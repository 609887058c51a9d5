"""Canonical transformations and their infinitesimal form."""

from __future__ import annotations

from typing import Optional

from ..algebra.elements import AlgebraElement
from ..errors import AlgebraMismatch
from ..forms.calculus import pull_back, wedge
from .morphisms import AlgebraMorphism, UnitaryConjugation
from .structures import SymplecticStructure, poisson_bracket


def canonical_residual(morphism: AlgebraMorphism, structure: SymplecticStructure) -> float:
    """max entry norm of Φ*ω − ω."""
    if morphism.source != structure.algebra or not morphism.is_endomorphism:
        raise AlgebraMismatch("canonical transformations map the structure's algebra onto itself")
    return pull_back(morphism, structure.form).distance(structure.form)


def is_canonical_transformation(
    morphism: AlgebraMorphism,
    structure: SymplecticStructure,
    tolerance: Optional[float] = None,
) -> bool:
    tol = structure.algebra.tolerance if tolerance is None else tolerance
    return canonical_residual(morphism, structure) <= tol * max(1.0, structure.form.norm())


def exterior_power_residual(morphism: AlgebraMorphism, structure: SymplecticStructure) -> float:
    """‖Φ*(ω∧ω) − ω∧ω‖, entrywise."""
    omega2 = wedge(structure.form, structure.form)
    return pull_back(morphism, omega2).distance(omega2)


def infinitesimal_canonical_change(
    structure: SymplecticStructure,
    generator: AlgebraElement,
    b: AlgebraElement,
    epsilon: float,
) -> AlgebraElement:
    """δB = ε{G, B}."""
    if epsilon == 0:
        return b.scale(0.0)
    return poisson_bracket(structure, generator, b).scale(epsilon)


def hamiltonian_flow(structure: SymplecticStructure, generator: AlgebraElement, t: float) -> UnitaryConjugation:
    """The canonical transformation exp(t·Y_G) on a quantum structure.

    With ω = −iħω_c, Y_G = (i/ħ)D_G and exp(tY_G)(B) = U* B U for
    U = exp(−iGt/ħ); this is conjugation by exp(iGt/ħ).
    """
    hbar = structure.hbar if structure.hbar is not None else 1.0
    return UnitaryConjugation.exponential(generator, -t, hbar)
