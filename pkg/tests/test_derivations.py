from __future__ import annotations

import numpy as np
import pytest

from supmech.algebra.elements import AlgebraElement, p, q
from supmech.algebra.operations import commutator
from supmech.algebra.polynomial import Polynomial
from supmech.algebra.sampling import random_element
from supmech.derivations.basis import default_basis, from_derivations, gellmann_basis, random_derivation
from supmech.derivations.checks import IS_DERIVATION, LEIBNIZ_VIOLATION, check_derivation, infinitesimal_generator_residual
from supmech.derivations.derivation import InnerDerivation, VectorField, lie_bracket
from supmech.errors import NoInnerDerivations, NotInSpan, NotLieSubalgebra
from supmech.symplectic.morphisms import UnitaryConjugation


def test_inner_derivation_is_a_derivation(m3, rng) -> None:
    d = InnerDerivation(random_element(m3, rng))
    result = check_derivation(d, m3, seed=1)
    assert result.is_derivation
    assert result.status == IS_DERIVATION
    assert result.witness is None
    assert result.pairs_checked >= 50


def test_right_multiplication_is_rejected_with_witness(m2, sigmas) -> None:
    sx = sigmas[0]
    result = check_derivation(lambda a: a * sx, m2, seed=1)
    assert not result.is_derivation
    assert result.status == LEIBNIZ_VIOLATION
    a, b = result.witness
    assert (a * sx * b).norm() > 1e-6


def test_generator_is_stored_trace_free(m2) -> None:
    d = InnerDerivation(AlgebraElement(m2, np.diag([3.0, 1.0])))
    assert abs(np.trace(d.generator.matrix)) < 1e-12
    assert np.allclose(d.generator.matrix, np.diag([1.0, -1.0]))


def test_commutative_algebras_have_no_inner_derivations(poly1) -> None:
    with pytest.raises(NoInnerDerivations):
        InnerDerivation(q(poly1))


def test_lie_bracket_of_inner_derivations(sigmas) -> None:
    sx, sy, _ = sigmas
    bracket = lie_bracket(InnerDerivation(sx), InnerDerivation(sy))
    assert bracket.is_close(InnerDerivation(commutator(sx, sy)))


def test_lie_bracket_of_vector_fields(poly1) -> None:
    # [q ∂_p, p ∂_q] = q ∂_q − p ∂_p
    empty = Polynomial(poly1.nvars)
    x = VectorField(poly1, [empty, q(poly1).polynomial])
    y = VectorField(poly1, [p(poly1).polynomial, empty])
    expected = VectorField(poly1, [q(poly1).polynomial, p(poly1).polynomial.scale(-1)])
    assert lie_bracket(x, y).is_close(expected)


def test_gellmann_expansion_round_trip(m3, rng) -> None:
    basis = gellmann_basis(m3)
    assert basis.size == 8
    x = random_derivation(basis, rng)
    coords = basis.expand_scalars(x)
    assert basis.combine_scalars(coords).is_close(x)


def test_basis_jacobi(m2, poly1) -> None:
    assert default_basis(m2).jacobi_residual() < 1e-10
    assert default_basis(poly1).jacobi_residual() < 1e-10


def test_non_closed_generators_are_refused(sigmas) -> None:
    sx, sy, _ = sigmas
    with pytest.raises(NotLieSubalgebra):
        from_derivations(sx.algebra, [InnerDerivation(sx), InnerDerivation(sy)])


def test_expand_outside_span(sigmas) -> None:
    sx, _, sz = sigmas
    basis = from_derivations(sx.algebra, [InnerDerivation(sx)])
    with pytest.raises(NotInSpan):
        basis.expand(InnerDerivation(sz))


def test_generator_of_conjugation_flow_is_a_derivation(m2, sigmas) -> None:
    sz = sigmas[2]

    def family(t):
        return UnitaryConjugation.exponential(sz, t)

    result = infinitesimal_generator_residual(family, m2)
    assert result.is_derivation
