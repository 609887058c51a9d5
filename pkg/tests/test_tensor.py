from __future__ import annotations

import numpy as np
import pytest

from supmech.algebra.descriptors import tensor_algebra
from supmech.algebra.elements import p, q, tensor_element, unit
from supmech.algebra.matrices import pauli
from supmech.algebra.sampling import random_element
from supmech.errors import UnclassifiedWorld, ZeroParameter
from supmech.symplectic.structures import quantum_form
from supmech.tensor.product import generalized_mixed_pb, jacobiator, product_pb, symmetrized_pb
from supmech.tensor.witness import (
    COMMUTATIVE,
    MIXED,
    MIXED_BRACKET,
    PRODUCT_BRACKET,
    QUANTUM,
    SYMMETRIZED_BRACKET,
    run_jacobi,
)
from supmech.tensor.worlds import (
    BOTH_COMMUTATIVE,
    BOTH_QUANTUM,
    INCONSISTENT,
    MIXED_CASE,
    ProductFailure,
    ProductHamiltonian,
    classify_worlds,
    solve_product_hamiltonian,
)


def test_two_classical_worlds(classical1) -> None:
    result = classify_worlds(classical1, classical1)
    assert result.verdict == BOTH_COMMUTATIVE
    assert result.permitted
    assert result.lam == 0


def test_two_quantum_worlds_share_lambda(quantum2) -> None:
    result = classify_worlds(quantum2, quantum2, seed=7)
    assert result.verdict == BOTH_QUANTUM
    assert abs(result.lam - 1j) < 1e-8
    assert result.to_dict()["lambda"] == pytest.approx([0.0, 1.0], abs=1e-8)


def test_planck_constants_must_agree(m2, quantum2) -> None:
    result = classify_worlds(quantum2, quantum_form(m2, 2.0))
    assert result.verdict == INCONSISTENT
    assert not result.permitted
    assert "lambda" not in result.to_dict()


def test_mixed_worlds_are_inconsistent(classical1, quantum2) -> None:
    for left, right in ((classical1, quantum2), (quantum2, classical1)):
        result = classify_worlds(left, right)
        assert result.verdict == INCONSISTENT
        assert "lambda = 0" in result.reason


def test_product_bracket_is_the_commutator_on_kronecker_products(quantum2, rng) -> None:
    alg = tensor_algebra(quantum2.algebra, quantum2.algebra)
    classification = classify_worlds(quantum2, quantum2)
    u, v = random_element(alg, rng, hermitian=True), random_element(alg, rng, hermitian=True)
    got = product_pb(quantum2, quantum2, classification, u, v).flatten()
    fu, fv = u.flatten(), v.flatten()
    assert np.allclose(got, (fu @ fv - fv @ fu) / (-1j), atol=1e-9)


def test_product_bracket_refused_for_mixed_worlds(classical1, quantum2, poly1, sigmas) -> None:
    classification = classify_worlds(classical1, quantum2)
    u = tensor_element(q(poly1), sigmas[0])
    with pytest.raises(UnclassifiedWorld):
        product_pb(classical1, quantum2, classification, u, u)


def test_symmetrized_bracket_agrees_in_permitted_worlds(classical1, poly1, rng) -> None:
    alg = tensor_algebra(poly1, poly1)
    classification = classify_worlds(classical1, classical1)
    u, v = random_element(alg, rng, 1), random_element(alg, rng, 1)
    lhs = product_pb(classical1, classical1, classification, u, v)
    assert lhs.distance(symmetrized_pb(classical1, classical1, u, v)) < 1e-9


@pytest.mark.parametrize("bracket", [PRODUCT_BRACKET, SYMMETRIZED_BRACKET])
@pytest.mark.parametrize("case", [COMMUTATIVE, QUANTUM])
def test_jacobi_holds_in_permitted_worlds(bracket, case) -> None:
    outcome = run_jacobi(bracket, case)
    assert outcome.expect_zero
    assert outcome.as_expected
    assert outcome.norm < 1e-7


def test_symmetrized_bracket_breaks_jacobi_on_mixed_witness(poly1) -> None:
    outcome = run_jacobi(SYMMETRIZED_BRACKET, MIXED)
    assert not outcome.expect_zero
    assert outcome.as_expected
    mat = outcome.jacobiator.algebra.right
    expected = tensor_element(unit(poly1), pauli(mat)[1]).scale(2.0)
    assert outcome.jacobiator.distance(expected) < 1e-9


def test_product_bracket_has_no_mixed_case() -> None:
    with pytest.raises(UnclassifiedWorld):
        run_jacobi(PRODUCT_BRACKET, MIXED)


def test_generalized_mixed_bracket(poly1, sigmas) -> None:
    sx, sy, sz = sigmas
    u = tensor_element(q(poly1), sx)
    v = tensor_element(unit(poly1), sy)
    assert generalized_mixed_pb(-1j, u, v).is_close(tensor_element(q(poly1), sz).scale(-2.0))
    with pytest.raises(ZeroParameter):
        generalized_mixed_pb(0, u, v)


def test_generalized_mixed_bracket_satisfies_jacobi(poly1, m2, rng) -> None:
    alg = tensor_algebra(poly1, m2)
    u, v, w = (random_element(alg, rng, 1, hermitian=True) for _ in range(3))
    j = jacobiator(lambda x, y: generalized_mixed_pb(-1j, x, y), u, v, w)
    assert j.norm() < 1e-8
    assert run_jacobi(MIXED_BRACKET, MIXED).norm < 1e-9


def test_product_hamiltonian_exists_for_two_quantum_factors(quantum2, sigmas) -> None:
    sx, _, sz = sigmas
    result = solve_product_hamiltonian(quantum2, quantum2, sx, sz, seed=3)
    assert isinstance(result, ProductHamiltonian)
    assert abs(result.lam - 1j) < 1e-8
    assert result.check.is_derivation


def test_product_hamiltonian_fails_for_mixed_factors(classical1, quantum2, poly1, sigmas) -> None:
    h = (q(poly1) * q(poly1) + p(poly1) * p(poly1)).scale(0.5)
    result = solve_product_hamiltonian(classical1, quantum2, h, sigmas[2], seed=3)
    assert isinstance(result, ProductFailure)
    assert result.stage == MIXED_CASE
    assert result.to_dict()["stage"] == MIXED_CASE
