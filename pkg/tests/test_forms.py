from __future__ import annotations

import pytest

from supmech.algebra.elements import p, q, unit
from supmech.algebra.sampling import random_element
from supmech.derivations.basis import default_basis, random_derivation
from supmech.errors import DegreeZero
from supmech.forms.calculus import (
    IMAGINARY,
    NEITHER,
    REAL,
    check_z_linearity,
    classify_reality,
    exterior_derivative,
    interior_product,
    interior_product_or_zero,
    lie_derivative,
    wedge,
)
from supmech.forms.form import DifferentialForm, coordinate_one_form, random_form
from supmech.symplectic.structures import canonical_form


@pytest.mark.parametrize("label", ["m2", "poly1"])
def test_d_squared_vanishes(label, request, rng) -> None:
    algebra = request.getfixturevalue(label)
    basis = default_basis(algebra)
    for degree in (0, 1):
        alpha = random_form(basis, degree, rng)
        assert exterior_derivative(exterior_derivative(alpha)).norm() < 1e-9


def test_d_of_function_is_its_derivative(poly1) -> None:
    basis = default_basis(poly1)
    f = q(poly1) * p(poly1)
    df = exterior_derivative(DifferentialForm.function(f, basis))
    assert df.value((0,)).is_close(p(poly1))
    assert df.value((1,)).is_close(q(poly1))


def test_cartan_formula(m2, rng) -> None:
    basis = default_basis(m2)
    x = random_derivation(basis, rng)
    alpha = random_form(basis, 1, rng)
    lhs = lie_derivative(x, alpha)
    rhs = interior_product(x, exterior_derivative(alpha)) + exterior_derivative(interior_product(x, alpha))
    assert lhs.distance(rhs) < 1e-9


def test_cartan_formula_on_phase_space(poly1, rng) -> None:
    basis = default_basis(poly1)
    x = random_derivation(basis, rng)
    alpha = random_form(basis, 1, rng, max_degree=2)
    lhs = lie_derivative(x, alpha)
    rhs = interior_product(x, exterior_derivative(alpha)) + exterior_derivative(interior_product(x, alpha))
    assert lhs.distance(rhs) < 1e-9


def test_interior_product_of_function(m2, rng) -> None:
    basis = default_basis(m2)
    f = DifferentialForm.function(random_element(m2, rng), basis)
    x = random_derivation(basis, rng)
    with pytest.raises(DegreeZero):
        interior_product(x, f)
    assert interior_product_or_zero(x, f).is_zero()


def test_wedge_of_one_forms_is_antisymmetric_when_commutative(poly1) -> None:
    basis = default_basis(poly1)
    dq, dp = coordinate_one_form(basis, 0), coordinate_one_form(basis, 1)
    assert wedge(dq, dp).distance(-wedge(dp, dq)) < 1e-12
    assert wedge(dq, dq).is_zero()


def test_canonical_form_is_imaginary(m2, quantum2) -> None:
    omega = canonical_form(m2)
    assert classify_reality(omega) == IMAGINARY
    assert classify_reality(quantum2.form) == REAL


def test_reality_neither(m2, rng) -> None:
    omega = canonical_form(m2)
    mixed = omega + omega.scale(1j)
    assert classify_reality(mixed) == NEITHER


def test_forms_are_central_linear(poly1, rng) -> None:
    basis = default_basis(poly1)
    omega = random_form(basis, 2, rng)
    assert check_z_linearity(omega.evaluate, basis, 2, seed=3) < 1e-9


def test_form_of_unit_is_closed(m2) -> None:
    basis = default_basis(m2)
    assert exterior_derivative(DifferentialForm.function(unit(m2), basis)).is_zero()
