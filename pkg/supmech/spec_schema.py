"""System-spec documents: JSON schema validation and object construction.

A system spec describes an algebra, its symplectic form, a Hamiltonian and
optionally a state, evolution settings and tracked observables.  On a
tensor algebra the form and Hamiltonian are given per factor together with
an interaction list, unless the form is ``"mixed"`` (the generalized
Poly ⊗ Matrix structure with a single Hamiltonian).
"""

from __future__ import annotations

import json
import re
from contextlib import contextmanager
from typing import Any, Dict, List, Optional, Tuple, Union

import jsonschema

from .algebra.descriptors import DEFAULT_TOLERANCE, AlgebraDescriptor
from .algebra.elements import AlgebraElement
from .config import SupmechConfig
from .derivations.basis import default_basis
from .derivations.derivation import DEFAULT_MAX_FIELD_DEGREE
from .dynamics.coupled import CoupledSystem, coupled_system
from .dynamics.evolution import EvolutionConfig
from .dynamics.states import StateFunctional
from .errors import AlgebraMismatch, NotSpecial, SpecParseError
from .serialization import (
    algebra_from_json,
    complex_from_json,
    derivation_from_json,
    element_from_json,
    form_from_json,
    state_from_json,
)
from .symplectic.solver import DEFAULT_RANK_THRESHOLD
from .symplectic.structures import (
    HamiltonianSystem,
    SymplecticStructure,
    canonical_structure,
    classical_form,
    generalized_pair,
    mixed_structure,
    quantum_form,
)

FORM_NAMES = ["canonical", "quantum", "classical", "mixed"]

_ALGEBRA = {
    "oneOf": [
        {"type": "string"},
        {
            "type": "object",
            "minProperties": 1,
            "maxProperties": 1,
            "properties": {
                "matrix": {"type": "integer", "minimum": 1},
                "polynomial": {"type": "integer", "minimum": 1},
                "tensor": {"type": "array", "minItems": 2, "maxItems": 2},
            },
            "additionalProperties": False,
        },
    ]
}

_FORM = {
    "oneOf": [
        {"enum": FORM_NAMES},
        {
            "type": "object",
            "properties": {
                "degree": {"const": 2},
                "basis": {"type": "string"},
                "entries": {"type": "array"},
            },
            "required": ["degree", "entries"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"left": {}, "right": {}},
            "required": ["left", "right"],
            "additionalProperties": False,
        },
    ]
}

_PAIR = {
    "type": "object",
    "properties": {"left": {}, "right": {}},
    "required": ["left", "right"],
    "additionalProperties": False,
}

SYSTEM_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "algebra": _ALGEBRA,
        "form": _FORM,
        "hbar": {"type": "number", "exclusiveMinimum": 0},
        "b": {},
        "subalgebra": {"type": "array", "items": {"type": "object"}},
        "hamiltonian": {},
        "interaction": {"type": "array", "items": _PAIR},
        "state": {"type": "object"},
        "evolution": {
            "type": "object",
            "properties": {
                "t_end": {"type": "number", "minimum": 0},
                "dt": {"type": "number", "exclusiveMinimum": 0},
                "method": {"enum": ["rk4", "exact"]},
                "record_every": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "track": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"name": {"type": "string"}, "value": {}},
                "required": ["name", "value"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["algebra", "form"],
    "additionalProperties": False,
}


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _line_of(text: str, field: str) -> Optional[int]:
    """1-based line of the first occurrence of the field's last key."""
    if not field:
        return None
    leaf = field.split("/")[-1]
    if leaf.isdigit():
        leaf = field.split("/")[-2] if "/" in field else leaf
    match = re.search(r'"%s"\s*:' % re.escape(leaf), text)
    if match is None:
        return None
    return text.count("\n", 0, match.start()) + 1


def parse_spec(text: str, source: str = "<spec>") -> Dict[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{source}: invalid JSON: {exc.msg}", line=exc.lineno) from exc
    validator = jsonschema.Draft7Validator(SYSTEM_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        field = "/".join(str(p) for p in err.absolute_path)
        if err.validator == "additionalProperties":
            unknown = re.findall(r"'([^']+)'", err.message)
            if unknown:
                field = "/".join(filter(None, [field, unknown[0]]))
        raise SpecParseError(f"{source}: {err.message}", line=_line_of(text, field), field=field or None)
    return data


def load_spec(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from exc
    return parse_spec(text, path)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

@contextmanager
def _field(name: str):
    """Report construction errors as SpecParseError naming the spec field."""
    try:
        yield
    except SpecParseError:
        raise
    except (ValueError, KeyError, TypeError, IndexError, AlgebraMismatch, NotSpecial) as exc:
        raise SpecParseError(f"{name}: {exc}", field=name) from exc


def spec_algebra(spec: Dict[str, Any], config: Optional[SupmechConfig] = None) -> AlgebraDescriptor:
    tol = config.numerics.tolerance if config else DEFAULT_TOLERANCE
    with _field("algebra"):
        return algebra_from_json(spec["algebra"], tol)


def _hbar(spec: Dict[str, Any], config: Optional[SupmechConfig]) -> float:
    if "hbar" in spec:
        return float(spec["hbar"])
    return config.physics.hbar if config else 1.0


def _structure_for(
    algebra: AlgebraDescriptor,
    form: Any,
    spec: Dict[str, Any],
    hbar: float,
    field: str,
    config: Optional[SupmechConfig] = None,
) -> SymplecticStructure:
    with _field(field):
        if "subalgebra" in spec and form in ("canonical", "quantum"):
            degree = config.calculus.max_vector_field_degree if config else DEFAULT_MAX_FIELD_DEGREE
            gens = [derivation_from_json(algebra, d, degree) for d in spec["subalgebra"]]
            b = 1.0 if form == "canonical" else -1j * hbar
            return generalized_pair(algebra, gens, b, hbar if form == "quantum" else None)
        if form == "canonical":
            return canonical_structure(algebra)
        if form == "quantum":
            return quantum_form(algebra, hbar)
        if form == "classical":
            return classical_form(algebra)
        if form == "mixed":
            b = complex_from_json(spec["b"]) if "b" in spec else -1j * hbar
            return mixed_structure(algebra, b)
        if isinstance(form, dict) and "entries" in form:
            threshold = config.numerics.rank_threshold if config else DEFAULT_RANK_THRESHOLD
            return SymplecticStructure(form_from_json(default_basis(algebra), form), hbar=hbar, rank_threshold=threshold)
        raise ValueError(f"unsupported form {form!r} on {algebra.label}")


def _is_factorwise(algebra: AlgebraDescriptor, spec: Dict[str, Any]) -> bool:
    return algebra.is_tensor and spec["form"] != "mixed"


def build_structure(spec: Dict[str, Any], config: Optional[SupmechConfig] = None) -> SymplecticStructure:
    """The symplectic structure of a single-algebra spec."""
    algebra = spec_algebra(spec, config)
    if _is_factorwise(algebra, spec):
        raise SpecParseError("a factorwise tensor spec has no single structure; use build_system", field="form")
    return _structure_for(algebra, spec["form"], spec, _hbar(spec, config), "form", config)


def _factor_forms(spec: Dict[str, Any]) -> Tuple[Any, Any]:
    form = spec["form"]
    if isinstance(form, dict) and "left" in form:
        return form["left"], form["right"]
    return form, form


def build_system(spec: Dict[str, Any], config: Optional[SupmechConfig] = None, seed: int = 0) -> Union[HamiltonianSystem, CoupledSystem]:
    """A HamiltonianSystem, or a CoupledSystem for factorwise tensor specs.

    Coupling refusals surface as ForbiddenCoupling.
    """
    if "hamiltonian" not in spec:
        raise SpecParseError("'hamiltonian' is a required property", field="hamiltonian")
    algebra = spec_algebra(spec, config)
    hbar = _hbar(spec, config)
    if not _is_factorwise(algebra, spec):
        structure = _structure_for(algebra, spec["form"], spec, hbar, "form", config)
        with _field("hamiltonian"):
            return HamiltonianSystem(structure, element_from_json(algebra, spec["hamiltonian"]))
    left_form, right_form = _factor_forms(spec)
    ham = spec["hamiltonian"]
    if not (isinstance(ham, dict) and "left" in ham and "right" in ham):
        raise SpecParseError("a tensor system needs {left, right} Hamiltonians", field="hamiltonian")
    sub = {k: v for k, v in spec.items() if k != "subalgebra"}
    left = _structure_for(algebra.left, left_form, sub, hbar, "form/left", config)
    right = _structure_for(algebra.right, right_form, sub, hbar, "form/right", config)
    with _field("hamiltonian"):
        h_left = HamiltonianSystem(left, element_from_json(algebra.left, ham["left"]))
        h_right = HamiltonianSystem(right, element_from_json(algebra.right, ham["right"]))
    with _field("interaction"):
        interaction = [
            (element_from_json(algebra.left, t["left"]), element_from_json(algebra.right, t["right"]))
            for t in spec.get("interaction", [])
        ]
    return coupled_system(h_left, h_right, interaction, seed=seed)


def build_state(spec: Dict[str, Any], config: Optional[SupmechConfig] = None) -> Optional[StateFunctional]:
    if "state" not in spec:
        return None
    algebra = spec_algebra(spec, config)
    with _field("state"):
        return state_from_json(algebra, spec["state"])


def build_track(spec: Dict[str, Any], config: Optional[SupmechConfig] = None) -> List[Tuple[str, AlgebraElement]]:
    algebra = spec_algebra(spec, config)
    out = []
    for k, item in enumerate(spec.get("track", [])):
        with _field(f"track/{k}"):
            out.append((item["name"], element_from_json(algebra, item["value"])))
    return out


def build_evolution(spec: Dict[str, Any], config: Optional[SupmechConfig] = None) -> EvolutionConfig:
    base = config.evolution if config else None
    values = {
        "t_end": base.t_end if base else 10.0,
        "dt": base.dt if base else 1e-3,
        "method": base.method if base else "rk4",
        "error_check_every": base.error_check_every if base else 1000,
        "max_local_error": base.max_local_error if base else 1e-6,
        "record_every": base.record_every if base else 1,
    }
    values.update(spec.get("evolution", {}))
    with _field("evolution"):
        return EvolutionConfig(**values)
