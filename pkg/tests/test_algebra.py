from __future__ import annotations

import numpy as np
import pytest

from supmech.algebra.descriptors import matrix_algebra, parse_algebra_label, polynomial_algebra, tensor_algebra
from supmech.algebra.elements import AlgebraElement, embed_left, p, q, tensor_element, unit
from supmech.algebra.matrices import SIGMA_X, SIGMA_Y, SIGMA_Z, gellmann_generators, spin_matrices
from supmech.algebra.operations import CenterKind, center_description, commutator, is_central, is_special
from supmech.algebra.sampling import random_element
from supmech.errors import AlgebraMismatch


def test_matrix_product_matches_numpy(m2, rng) -> None:
    a, b = random_element(m2, rng), random_element(m2, rng)
    assert np.allclose((a * b).matrix, a.matrix @ b.matrix)


def test_pauli_commutator(sigmas) -> None:
    sx, sy, sz = sigmas
    assert commutator(sx, sy).is_close(sz.scale(2j))


def test_star_is_conjugate_transpose(m3, rng) -> None:
    a = random_element(m3, rng)
    assert np.allclose(a.star().matrix, a.matrix.conj().T)
    assert (a * a.star()).star().is_close(a * a.star())


def test_polynomial_product_and_star(poly1) -> None:
    f = q(poly1) + p(poly1).scale(1j)
    g = f * f.star()
    # |q + ip|² = q² + p²
    assert g.is_close(q(poly1) * q(poly1) + p(poly1) * p(poly1))


def test_mixing_algebras_raises(m2, poly1) -> None:
    with pytest.raises(AlgebraMismatch):
        unit(m2) + unit(poly1)


def test_tensor_flattens_to_kron(sigmas) -> None:
    sx, _, sz = sigmas
    assert np.allclose(tensor_element(sx, sz).flatten(), np.kron(SIGMA_X, SIGMA_Z))


def test_tensor_product_is_factorwise(sigmas) -> None:
    sx, sy, sz = sigmas
    alg = tensor_algebra(sx.algebra, sx.algebra)
    lhs = tensor_element(sx, sy, alg) * tensor_element(sy, sz, alg)
    assert lhs.is_close(tensor_element(sx * sy, sy * sz, alg))


def test_poly_matrix_tensor_multiplies_in_both_factors(poly1, sigmas) -> None:
    sx, sy, _ = sigmas
    alg = tensor_algebra(poly1, sx.algebra)
    u = tensor_element(q(poly1), sx, alg)
    v = tensor_element(p(poly1), sy, alg)
    assert (u * v).is_close(tensor_element(q(poly1) * p(poly1), sx * sy, alg))


def test_centers(m2, poly1) -> None:
    assert center_description(m2) == CenterKind.SCALARS_ONLY
    assert center_description(poly1) == CenterKind.WHOLE_ALGEBRA
    mixed = tensor_algebra(poly1, m2)
    assert center_description(mixed) == CenterKind.LEFT_FACTOR_CENTRAL
    assert is_central(embed_left(q(poly1), mixed))
    assert not is_central(tensor_element(unit(poly1), AlgebraElement(m2, SIGMA_Y), mixed))


def test_is_special(m2, poly1) -> None:
    assert is_special(m2)
    assert is_special(tensor_algebra(m2, matrix_algebra(3)))
    assert not is_special(poly1)
    assert not is_special(matrix_algebra(1))


def test_parse_algebra_label() -> None:
    assert parse_algebra_label("matrix:3") == matrix_algebra(3)
    assert parse_algebra_label("poly:2") == polynomial_algebra(2)
    assert parse_algebra_label("matrix:2*poly:1").is_tensor
    with pytest.raises(ValueError):
        parse_algebra_label("banana:2")


def test_gellmann_generators_are_trace_orthogonal() -> None:
    gens = gellmann_generators(3)
    assert len(gens) == 8
    gram = np.array([[np.trace(a @ b) for b in gens] for a in gens])
    assert np.allclose(gram, 2 * np.eye(8))


def test_spin_matrices_satisfy_su2() -> None:
    s1, s2, s3 = spin_matrices(1.0)
    assert s1.algebra.n == 3
    assert commutator(s1, s2).is_close(s3.scale(1j))
    casimir = s1 * s1 + s2 * s2 + s3 * s3
    assert casimir.is_close(unit(s1.algebra).scale(2.0))


def test_spin_rejects_non_half_integer() -> None:
    with pytest.raises(ValueError):
        spin_matrices(0.3)


def test_hermitian_sampling(m3, rng) -> None:
    h = random_element(m3, rng, hermitian=True)
    assert h.is_close(h.star())
