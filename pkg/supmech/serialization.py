"""JSON literals for algebras, elements, derivations, forms and states.

    algebra     {"matrix": n} | {"polynomial": n} | {"tensor": [alg, alg]} | "matrix:2"
    matrix      [[[re, im], ...], ...]
    polynomial  [{"exponents": [..], "coeff": [re, im]}, ...]
    tensor      [{"left": <left element>, "right": <right element>}, ...]
    derivation  {"inner": <element>} | {"field": [<polynomial>, ...]}
    form        {"degree": p, "entries": [{"indices": [..], "value": <element>}]}
    state       {"density": <matrix>} | {"ensemble": [{"point": [..], "weight": w}]}
                | {"product": [<state>, <state>]}

A bare number is accepted wherever an element is expected and means that
multiple of the unit.  Complex numbers may also be given as plain reals.
"""

from __future__ import annotations

from numbers import Number
from typing import Any, Dict, List

import numpy as np

from .algebra.descriptors import (
    DEFAULT_TOLERANCE,
    AlgebraDescriptor,
    matrix_algebra,
    parse_algebra_label,
    polynomial_algebra,
    tensor_algebra,
)
from .algebra.elements import AlgebraElement, scalar, tensor_from_pairs, zero
from .algebra.polynomial import Polynomial
from .derivations.basis import DerivationBasis
from .derivations.derivation import DEFAULT_MAX_FIELD_DEGREE, Derivation, InnerDerivation, VectorField
from .forms.form import DifferentialForm


def complex_to_json(z: complex) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(value: Any) -> complex:
    if isinstance(value, Number):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ValueError(f"expected a number or [re, im], got {value!r}")


# ---------------------------------------------------------------------------
# Algebras
# ---------------------------------------------------------------------------

def algebra_to_json(algebra: AlgebraDescriptor) -> Dict[str, Any]:
    if algebra.is_matrix:
        return {"matrix": algebra.n}
    if algebra.is_polynomial:
        return {"polynomial": algebra.n}
    return {"tensor": [algebra_to_json(algebra.left), algebra_to_json(algebra.right)]}


def algebra_from_json(value: Any, tolerance: float = DEFAULT_TOLERANCE) -> AlgebraDescriptor:
    if isinstance(value, str):
        return parse_algebra_label(value, tolerance)
    if not isinstance(value, dict) or len(value) != 1:
        raise ValueError(f"bad algebra literal: {value!r}")
    (kind, arg), = value.items()
    if kind == "matrix":
        return matrix_algebra(int(arg), tolerance)
    if kind == "polynomial":
        return polynomial_algebra(int(arg), tolerance)
    if kind == "tensor":
        left, right = arg
        return tensor_algebra(algebra_from_json(left, tolerance), algebra_from_json(right, tolerance))
    raise ValueError(f"unknown algebra kind {kind!r}")


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

def element_literal(element: AlgebraElement) -> Any:
    algebra = element.algebra
    if algebra.is_matrix:
        return [[complex_to_json(z) for z in row] for row in element.matrix]
    if algebra.is_polynomial:
        return [
            {"exponents": list(exps), "coeff": complex_to_json(c)}
            for exps, c in element.polynomial.items()
        ]
    return [{"left": element_literal(a), "right": element_literal(b)} for a, b in element.pairs()]


def element_to_json(element: AlgebraElement) -> Dict[str, Any]:
    """Self-describing form used in reports: algebra plus literal."""
    return {"algebra": algebra_to_json(element.algebra), "value": element_literal(element)}


def element_from_json(algebra: AlgebraDescriptor, value: Any) -> AlgebraElement:
    if isinstance(value, Number) or (
        isinstance(value, (list, tuple)) and len(value) == 2 and all(isinstance(v, Number) for v in value)
        and not algebra.is_matrix
    ):
        return scalar(algebra, complex_from_json(value))
    if algebra.is_matrix:
        arr = np.array([[complex_from_json(z) for z in row] for row in value], dtype=complex)
        if arr.shape != (algebra.n, algebra.n):
            raise ValueError(f"matrix literal has shape {arr.shape}, expected ({algebra.n}, {algebra.n})")
        return AlgebraElement(algebra, arr)
    if algebra.is_polynomial:
        terms: Dict[tuple, complex] = {}
        for term in value:
            exps = tuple(int(e) for e in term["exponents"])
            if len(exps) != algebra.nvars:
                raise ValueError(f"exponents {list(exps)} need {algebra.nvars} entries")
            terms[exps] = terms.get(exps, 0j) + complex_from_json(term["coeff"])
        return AlgebraElement(algebra, Polynomial(algebra.nvars, terms))
    pairs = [
        (element_from_json(algebra.left, t["left"]), element_from_json(algebra.right, t["right"]))
        for t in value
    ]
    return tensor_from_pairs(algebra, pairs) if pairs else zero(algebra)


# ---------------------------------------------------------------------------
# Derivations and forms
# ---------------------------------------------------------------------------

def derivation_to_json(derivation: Derivation) -> Dict[str, Any]:
    if isinstance(derivation, InnerDerivation):
        return {"inner": element_literal(derivation.generator)}
    if isinstance(derivation, VectorField):
        return {
            "field": [element_literal(AlgebraElement(derivation.algebra, c)) for c in derivation.components]
        }
    raise TypeError(f"{type(derivation).__name__} has no JSON literal")


def derivation_from_json(
    algebra: AlgebraDescriptor,
    value: Dict[str, Any],
    max_degree: int = DEFAULT_MAX_FIELD_DEGREE,
) -> Derivation:
    if "inner" in value:
        return InnerDerivation(element_from_json(algebra, value["inner"]))
    if "field" in value:
        comps = [element_from_json(algebra, c).polynomial for c in value["field"]]
        return VectorField(algebra, comps, max_degree)
    raise ValueError(f"bad derivation literal: {value!r}")


def form_to_json(form: DifferentialForm) -> Dict[str, Any]:
    return {
        "degree": form.degree,
        "basis": form.basis.kind,
        "entries": [{"indices": list(idx), "value": element_literal(v)} for idx, v in form.entries()],
    }


def form_from_json(basis: DerivationBasis, value: Dict[str, Any]) -> DifferentialForm:
    degree = int(value["degree"])
    entries = {
        tuple(int(i) for i in e["indices"]): element_from_json(basis.algebra, e["value"])
        for e in value.get("entries", [])
    }
    return DifferentialForm(degree, basis, entries)


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

def state_to_json(state) -> Dict[str, Any]:
    from .dynamics.states import DensityMatrix, PhaseEnsemble, ProductState

    if isinstance(state, DensityMatrix):
        return {"density": [[complex_to_json(z) for z in row] for row in state.rho]}
    if isinstance(state, PhaseEnsemble):
        return {
            "ensemble": [
                {"point": [float(x) for x in pt], "weight": float(w)}
                for pt, w in zip(state.points, state.weights)
            ]
        }
    if isinstance(state, ProductState):
        return {"product": [state_to_json(state.left), state_to_json(state.right)]}
    raise TypeError(f"{type(state).__name__} is not a state")


def state_from_json(algebra: AlgebraDescriptor, value: Dict[str, Any]):
    from .dynamics.states import DensityMatrix, PhaseEnsemble, ProductState

    if "density" in value:
        rho = np.array([[complex_from_json(z) for z in row] for row in value["density"]], dtype=complex)
        return DensityMatrix(algebra, rho)
    if "ensemble" in value:
        points = [p["point"] for p in value["ensemble"]]
        weights = [float(p.get("weight", 1.0 / len(points))) for p in value["ensemble"]]
        return PhaseEnsemble(algebra, points, weights)
    if "product" in value:
        if not algebra.is_tensor:
            raise ValueError(f"product states need a tensor algebra, got {algebra.label}")
        left, right = value["product"]
        return ProductState(state_from_json(algebra.left, left), state_from_json(algebra.right, right))
    raise ValueError(f"bad state literal: {value!r}")
