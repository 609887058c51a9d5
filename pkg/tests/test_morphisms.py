from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg

from supmech.algebra.elements import AlgebraElement, p, q, scalar
from supmech.algebra.matrices import SIGMA_X, SIGMA_Y, SIGMA_Z
from supmech.algebra.operations import hermitian_part_check
from supmech.derivations.derivation import InnerDerivation, VectorField, derivation_star, lie_bracket
from supmech.derivations.pushforward import PushedDerivation, push_forward
from supmech.forms.calculus import form_star, pull_back, wedge
from supmech.forms.form import random_form
from supmech.symplectic.morphisms import IdentityMorphism, PolynomialSubstitution, UnitaryConjugation


def _random_unitary(rng, n: int) -> np.ndarray:
    h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scipy.linalg.expm(-1j * (h + h.conj().T) / 2)


@pytest.fixture
def conjugation(m2, rng):
    return UnitaryConjugation(m2, _random_unitary(rng, 2))


def test_identity_push_forward(m2, sigmas) -> None:
    x = InnerDerivation(sigmas[0])
    assert push_forward(IdentityMorphism(m2), x) is x


def test_push_forward_of_inner_derivation(m2, conjugation, sigmas) -> None:
    a = sigmas[0] + sigmas[2].scale(0.5)
    pushed = push_forward(conjugation, InnerDerivation(a))
    u = conjugation.u
    expected = InnerDerivation(AlgebraElement(m2, u @ a.matrix @ u.conj().T))
    assert isinstance(pushed, InnerDerivation)
    assert pushed.distance(expected) < 1e-10
    assert pushed.distance(PushedDerivation(conjugation, InnerDerivation(a))) < 1e-10


def test_push_forward_preserves_brackets(conjugation, sigmas) -> None:
    x, y = InnerDerivation(sigmas[0]), InnerDerivation(sigmas[1].scale(2.0))
    lhs = push_forward(conjugation, lie_bracket(x, y))
    rhs = lie_bracket(push_forward(conjugation, x), push_forward(conjugation, y))
    assert lhs.distance(rhs) < 1e-10


def test_push_forward_of_vector_field(poly1) -> None:
    phi = PolynomialSubstitution(poly1, [[2.0, 1.0], [0.0, 0.5]], shift=[0.3, -1.0])
    x = VectorField(poly1, [(q(poly1) * p(poly1)).polynomial, q(poly1).polynomial])
    pushed = push_forward(phi, x)
    assert isinstance(pushed, VectorField)
    assert pushed.distance(PushedDerivation(phi, x)) < 1e-9


def test_pull_back_by_identity(canonical2, m2) -> None:
    omega = canonical2.form
    assert pull_back(IdentityMorphism(m2), omega).distance(omega) < 1e-12


def test_pull_back_commutes_with_wedge(canonical2, conjugation, rng) -> None:
    basis = canonical2.basis
    alpha, beta = random_form(basis, 1, rng), random_form(basis, 1, rng)
    lhs = pull_back(conjugation, wedge(alpha, beta))
    rhs = wedge(pull_back(conjugation, alpha), pull_back(conjugation, beta))
    assert lhs.distance(rhs) < 1e-9


def test_canonical_form_is_invariant_under_inner_automorphisms(canonical2, m2) -> None:
    phi = UnitaryConjugation(m2, scipy.linalg.expm(-0.3j * SIGMA_Z))
    omega = canonical2.form
    assert pull_back(phi, omega).distance(omega) < 1e-10


def test_form_star(canonical2, quantum2, rng) -> None:
    omega = canonical2.form
    assert form_star(omega).distance(-omega) < 1e-12
    assert form_star(quantum2.form).distance(quantum2.form) < 1e-12
    alpha = random_form(canonical2.basis, 2, rng)
    assert form_star(form_star(alpha)).distance(alpha) < 1e-12


def test_derivation_star(sigmas, poly1) -> None:
    dz = InnerDerivation(sigmas[2])
    assert derivation_star(dz).distance(InnerDerivation(sigmas[2].scale(-1.0))) < 1e-12
    dq = VectorField.coordinate(poly1, 0)
    assert derivation_star(dq).distance(dq) < 1e-12
    x = InnerDerivation(sigmas[0].scale(1 + 2j) + sigmas[1])
    assert derivation_star(derivation_star(x)).distance(x) < 1e-12


def test_hermitian_part_check(m2, poly1) -> None:
    sx = AlgebraElement(m2, SIGMA_X)
    assert hermitian_part_check(sx)
    assert not hermitian_part_check(sx.scale(1j))
    assert hermitian_part_check(q(poly1) + p(poly1) * p(poly1))
    assert not hermitian_part_check(q(poly1).scale(1j))
    assert hermitian_part_check(AlgebraElement(m2, SIGMA_Y) * scalar(m2, 2.0))
