from __future__ import annotations

import pytest

from supmech.algebra.descriptors import matrix_algebra, polynomial_algebra
from supmech.errors import SpecParseError
from supmech.runner import parse_algebra_pair, run_verify, tensor_jacobi
from supmech.suites import run_calculus, run_dynamics_suite, run_symplectic, run_tensor
from supmech.suites.base import sub_seed


def _unexpected(cases) -> list:
    return [(c.name, c.status, c.residual, c.tolerance) for c in cases if not c.as_expected]


def test_sub_seed_is_stable_and_name_dependent() -> None:
    assert sub_seed(7, "a") == sub_seed(7, "a")
    assert sub_seed(7, "a") != sub_seed(7, "b")
    assert sub_seed(7, "a") != sub_seed(8, "a")
    assert 0 <= sub_seed(7, "a") < 2 ** 64


def test_calculus_suite_on_matrices(config) -> None:
    cases = run_calculus(matrix_algebra(2), 3, 11, config)
    names = {c.name for c in cases}
    assert "matrix:2/derivation-leibniz" in names
    assert "matrix:2/cartan-formula" in names
    assert _unexpected(cases) == []


def test_calculus_suite_on_polynomials(config) -> None:
    cases = run_calculus(polynomial_algebra(1), 3, 11, config)
    assert _unexpected(cases) == []


@pytest.mark.parametrize("algebra", [matrix_algebra(2), polynomial_algebra(1)], ids=lambda a: a.label)
def test_symplectic_suite(algebra, config) -> None:
    cases = run_symplectic(algebra, 3, 5, config)
    assert cases
    assert _unexpected(cases) == []


def test_tensor_suite_quantum_pair(config) -> None:
    cases, details = run_tensor(matrix_algebra(2), matrix_algebra(2), 3, 5, config)
    names = {c.name for c in cases}
    assert {"classification", "lambda-equals-i-hbar", "product-jacobi"} <= names
    assert details["lambda"][1] == pytest.approx(1.0, rel=1e-6)
    assert _unexpected(cases) == []


def test_tensor_suite_mixed_pair_expects_jacobi_failure(config) -> None:
    cases, details = run_tensor(polynomial_algebra(1), matrix_algebra(2), 3, 5, config)
    by_name = {c.name: c for c in cases}
    assert details["classification"]["verdict"] == "Inconsistent"
    assert by_name["mixed-jacobi"].expected_failure
    assert not by_name["mixed-jacobi"].passed
    assert by_name["product-bracket-refused"].passed
    assert by_name["generalized-mixed-jacobi"].passed
    assert _unexpected(cases) == []


def test_tensor_suite_unequal_hbar(config) -> None:
    cases, details = run_tensor(matrix_algebra(2), matrix_algebra(2), 2, 5, config, hbar_right=2.0)
    assert details["classification"]["verdict"] == "Inconsistent"
    assert _unexpected(cases) == []


def test_dynamics_suite_on_polynomials(config) -> None:
    cases = run_dynamics_suite(polynomial_algebra(1), 2, 3, config)
    names = {c.name for c in cases}
    assert "poly:1/oscillator" in names
    assert _unexpected(cases) == []


def test_run_verify_report(config) -> None:
    report = run_verify("symplectic", "poly:1", config, trials=2, seed=9, verbose=False)
    assert report.suite_name == "symplectic"
    assert report.seed == 9
    assert [c.name for c in report.cases] == sorted(c.name for c in report.cases)
    assert report.all_passed


def test_run_verify_is_deterministic(config) -> None:
    first = run_verify("calculus", "poly:1", config, trials=2, seed=4, verbose=False)
    second = run_verify("calculus", "poly:1", config, trials=2, seed=4, verbose=False)
    assert [c.residual for c in first.cases] == [c.residual for c in second.cases]


def test_bad_targets_and_labels(config) -> None:
    with pytest.raises(SpecParseError):
        run_verify("geometry", None, config, verbose=False)
    with pytest.raises(SpecParseError):
        parse_algebra_pair("matrix:2", config)
    with pytest.raises(SpecParseError):
        run_verify("symplectic", "matrix:0", config, verbose=False)


def test_tensor_jacobi_report(config) -> None:
    report = tensor_jacobi("symmetrized", "mixed", config, verbose=False)
    (case,) = report.cases
    assert case.expected_failure and not case.passed
    assert report.all_passed
    assert tensor_jacobi("product", "quantum", config, verbose=False).all_passed
