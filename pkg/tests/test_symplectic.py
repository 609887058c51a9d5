from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg

from supmech.algebra.elements import AlgebraElement, p, q, scalar, tensor_element, unit
from supmech.algebra.descriptors import tensor_algebra
from supmech.algebra.matrices import SIGMA_Z, spin_matrices
from supmech.derivations.basis import gellmann_basis
from supmech.derivations.derivation import InnerDerivation
from supmech.errors import NonDegeneracyFailure, NotLieSubalgebra, NotSpecial, NotUnique, ZeroParameter
from supmech.forms.form import DifferentialForm
from supmech.symplectic.morphisms import PolynomialSubstitution, UnitaryConjugation, rotation
from supmech.symplectic.structures import (
    SymplecticStructure,
    canonical_form,
    generalized_pair,
    hamiltonian_derivation,
    mixed_structure,
    poisson_bracket,
    quantum_form,
    scaled_structure,
    verify_symplectic,
)
from supmech.symplectic.transformations import (
    exterior_power_residual,
    hamiltonian_flow,
    infinitesimal_canonical_change,
    is_canonical_transformation,
)


def test_canonical_form_values(sigmas) -> None:
    sx, sy, sz = sigmas
    omega = canonical_form(sx.algebra)
    assert omega.evaluate(InnerDerivation(sx), InnerDerivation(sy)).is_close(sz.scale(2j))


def test_quantum_bracket_is_scaled_commutator(quantum2, sigmas) -> None:
    sx, sy, sz = sigmas
    assert poisson_bracket(quantum2, sx, sy).is_close(sz.scale(-2.0))


def test_quantum_bracket_matches_commutator_formula(m3, rng) -> None:
    from supmech.algebra.sampling import random_element

    hbar = 0.7
    structure = quantum_form(m3, hbar)
    a, b = random_element(m3, rng, hermitian=True), random_element(m3, rng, hermitian=True)
    expected = (a * b - b * a).scale(1.0 / (-1j * hbar))
    assert poisson_bracket(structure, a, b).distance(expected) < 1e-9


def test_classical_bracket(classical1, poly1) -> None:
    qq, pp = q(poly1), p(poly1)
    assert poisson_bracket(classical1, pp, qq).is_close(unit(poly1))
    h = (qq * qq + pp * pp).scale(0.5)
    assert poisson_bracket(classical1, h, qq).is_close(pp)
    assert poisson_bracket(classical1, h, pp).is_close(qq.scale(-1.0))


def test_structures_are_symplectic(quantum2, classical1) -> None:
    for structure, dim in ((quantum2, 3), (classical1, 2)):
        report = verify_symplectic(structure)
        assert report.closed_residual < 1e-9
        assert report.nondegenerate
        assert report.rank == dim == report.dimension
        assert report.kernel_dimension == 0


def test_degenerate_form_is_reported(m2) -> None:
    basis = gellmann_basis(m2)
    structure = SymplecticStructure(DifferentialForm(2, basis, {(0, 1): scalar(m2, 1.0)}))
    report = verify_symplectic(structure)
    assert not report.nondegenerate
    assert report.kernel_dimension == 1
    with pytest.raises(NotUnique):
        structure.hamiltonian_derivation(AlgebraElement(m2, SIGMA_Z))


def test_zero_parameter_is_refused(m2) -> None:
    with pytest.raises(ZeroParameter):
        scaled_structure(0.0, m2)


def test_quantum_form_needs_noncommutative_algebra(poly1) -> None:
    with pytest.raises(NotSpecial):
        quantum_form(poly1)


def test_rotation_is_canonical(classical1, poly1) -> None:
    rot = rotation(poly1)
    assert rot.is_symplectic_matrix()
    assert is_canonical_transformation(rot, classical1)
    stretch = PolynomialSubstitution(poly1, np.diag([2.0, 1.0]))
    assert not is_canonical_transformation(stretch, classical1)


def test_unitary_conjugation_is_canonical(quantum2, m2, rng) -> None:
    h = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    u = scipy.linalg.expm(-1j * (h + h.conj().T))
    phi = UnitaryConjugation(m2, u)
    assert is_canonical_transformation(phi, quantum2)
    assert exterior_power_residual(phi, quantum2) < 1e-9


def test_infinitesimal_canonical_change(quantum2, sigmas) -> None:
    sx, sy, sz = sigmas
    delta = infinitesimal_canonical_change(quantum2, sz, sx, 0.01)
    assert delta.is_close(sy.scale(-0.02))


def test_hamiltonian_flow_rotates_spin(quantum2, sigmas) -> None:
    sx, sy, sz = sigmas
    t = 0.3
    flow = hamiltonian_flow(quantum2, sz, t)
    expected = sx.scale(np.cos(2 * t)) - sy.scale(np.sin(2 * t))
    assert flow(sx).distance(expected) < 1e-10


def test_mixed_structure_bracket(poly1, m2, sigmas) -> None:
    sx, sy, sz = sigmas
    alg = tensor_algebra(poly1, m2)
    structure = mixed_structure(alg, -1j)
    u = tensor_element(q(poly1), sx, alg)
    v = tensor_element(unit(poly1), sy, alg)
    assert poisson_bracket(structure, u, v).is_close(tensor_element(q(poly1), sz, alg).scale(-2.0))


@pytest.fixture
def spin32():
    return spin_matrices(1.5)


@pytest.mark.parametrize("b", [1.0, 2.0, -1j])
def test_spin_three_halves_pair(spin32, b) -> None:
    s1, s2, s3 = spin32
    algebra = s3.algebra
    gens = [InnerDerivation(s) for s in spin32]
    structure = generalized_pair(algebra, gens, b)
    y = hamiltonian_derivation(structure, s3)
    assert y.distance(InnerDerivation(s3.scale(1 / b))) < 1e-9
    assert poisson_bracket(structure, s1, s2).distance(
        (s1 * s2 - s2 * s1).scale(1 / b)
    ) < 1e-9


def test_spin_pair_rejects_generic_hamiltonians(spin32) -> None:
    algebra = spin32[0].algebra
    structure = generalized_pair(algebra, [InnerDerivation(s) for s in spin32], 1.0)
    generic = AlgebraElement(algebra, np.diag([1.0, -2.0, 0.5, 0.5]).astype(complex))
    generic = generic + AlgebraElement(algebra, np.eye(4, k=2, dtype=complex) + np.eye(4, k=-2, dtype=complex))
    with pytest.raises(NonDegeneracyFailure):
        hamiltonian_derivation(structure, generic)


def test_pair_generators_must_close(spin32) -> None:
    s1, s2, _ = spin32
    with pytest.raises(NotLieSubalgebra):
        generalized_pair(s1.algebra, [InnerDerivation(s1), InnerDerivation(s2)], 1.0)
