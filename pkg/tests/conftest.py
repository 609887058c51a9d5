"""Shared fixtures: small algebras, Pauli matrices and standard structures."""

from __future__ import annotations

import numpy as np
import pytest

from supmech.algebra.descriptors import matrix_algebra, polynomial_algebra
from supmech.algebra.matrices import pauli
from supmech.config import SupmechConfig
from supmech.symplectic.structures import canonical_structure, classical_form, quantum_form


@pytest.fixture
def m2():
    return matrix_algebra(2)


@pytest.fixture
def m3():
    return matrix_algebra(3)


@pytest.fixture
def poly1():
    return polynomial_algebra(1)


@pytest.fixture
def poly2():
    return polynomial_algebra(2)


@pytest.fixture
def sigmas(m2):
    return pauli(m2)


@pytest.fixture
def canonical2(m2):
    return canonical_structure(m2)


@pytest.fixture
def quantum2(m2):
    return quantum_form(m2, 1.0)


@pytest.fixture
def classical1(poly1):
    return classical_form(poly1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def config(monkeypatch):
    monkeypatch.delenv("SUPMECH_TOLERANCE", raising=False)
    return SupmechConfig()
