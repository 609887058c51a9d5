from __future__ import annotations

import json

import numpy as np
import pytest

from supmech.dynamics.coupled import CoupledSystem
from supmech.dynamics.states import DensityMatrix, PhaseEnsemble, ProductState
from supmech.errors import ForbiddenCoupling, SpecParseError
from supmech.spec_schema import (
    build_evolution,
    build_state,
    build_structure,
    build_system,
    build_track,
    load_spec,
    parse_spec,
)
from supmech.symplectic.structures import HamiltonianSystem

SIGMA_X = [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
HALF_SIGMA_Z = [[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]

PRECESSION = {
    "name": "precession",
    "algebra": {"matrix": 2},
    "form": "quantum",
    "hamiltonian": HALF_SIGMA_Z,
    "state": {"density": [[0.5, 0.5], [0.5, 0.5]]},
    "track": [{"name": "sx", "value": SIGMA_X}],
    "evolution": {"t_end": 2, "dt": 1e-3, "record_every": 10},
}

OSCILLATOR = {
    "algebra": {"polynomial": 1},
    "form": "classical",
    "hamiltonian": [{"exponents": [2, 0], "coeff": 0.5}, {"exponents": [0, 2], "coeff": 0.5}],
    "state": {"ensemble": [{"point": [1, 0], "weight": 1}]},
    "track": [{"name": "q", "value": [{"exponents": [1, 0], "coeff": 1}]}],
}

MIXED_COUPLING = {
    "algebra": {"tensor": [{"polynomial": 1}, {"matrix": 2}]},
    "form": {"left": "classical", "right": "quantum"},
    "hamiltonian": {
        "left": [{"exponents": [0, 2], "coeff": 0.5}],
        "right": HALF_SIGMA_Z,
    },
    "interaction": [{"left": [{"exponents": [1, 0], "coeff": 1}], "right": SIGMA_X}],
}


def test_unknown_key_names_field_and_line() -> None:
    text = '{\n  "algebra": {"matrix": 2},\n  "form": "quantum",\n  "bogus": 1\n}\n'
    with pytest.raises(SpecParseError) as info:
        parse_spec(text)
    assert info.value.field == "bogus"
    assert info.value.line == 4
    assert info.value.to_dict()["details"] == {"field": "bogus", "line": 4}


def test_invalid_json_reports_line() -> None:
    with pytest.raises(SpecParseError) as info:
        parse_spec('{\n  "algebra": {"matrix": 2},\n  "form": \n}\n')
    assert info.value.line is not None
    assert info.value.field is None


def test_missing_form_is_rejected() -> None:
    with pytest.raises(SpecParseError):
        parse_spec(json.dumps({"algebra": {"matrix": 2}}))


def test_precession_spec_builds(tmp_path, config) -> None:
    path = tmp_path / "precession.json"
    path.write_text(json.dumps(PRECESSION, indent=2), encoding="utf-8")
    spec = load_spec(str(path))
    system = build_system(spec, config)
    assert isinstance(system, HamiltonianSystem)
    assert system.parameter == pytest.approx(-1j)
    state = build_state(spec, config)
    assert isinstance(state, DensityMatrix)
    ((name, sx),) = build_track(spec, config)
    assert name == "sx"
    assert state.expectation(sx) == pytest.approx(1.0)
    cfg = build_evolution(spec, config)
    assert cfg.t_end == 2 and cfg.record_every == 10
    assert cfg.method == config.evolution.method


def test_oscillator_spec_builds(config) -> None:
    spec = parse_spec(json.dumps(OSCILLATOR))
    system = build_system(spec, config)
    assert system.algebra.is_polynomial
    assert isinstance(build_state(spec, config), PhaseEnsemble)
    assert system.hamiltonian.evaluate(np.array([1.0, 1.0])) == pytest.approx(1.0)


def test_non_hermitian_hamiltonian_names_field(config) -> None:
    spec = dict(PRECESSION, hamiltonian=[[[0, 0], [1, 0]], [[0, 0], [0, 0]]])
    with pytest.raises(SpecParseError) as info:
        build_system(parse_spec(json.dumps(spec)), config)
    assert info.value.field == "hamiltonian"


def test_bad_matrix_shape_names_field(config) -> None:
    spec = dict(PRECESSION, track=[{"name": "bad", "value": [[1, 0, 0]]}])
    with pytest.raises(SpecParseError) as info:
        build_track(parse_spec(json.dumps(spec)), config)
    assert info.value.field == "track/0"


def test_factorwise_spec_has_no_single_structure(config) -> None:
    with pytest.raises(SpecParseError) as info:
        build_structure(parse_spec(json.dumps(MIXED_COUPLING)), config)
    assert info.value.field == "form"


def test_mixed_coupling_is_forbidden(config) -> None:
    with pytest.raises(ForbiddenCoupling) as info:
        build_system(parse_spec(json.dumps(MIXED_COUPLING)), config)
    assert info.value.details["verdict"] == "Inconsistent"


def test_quantum_coupling_builds(config) -> None:
    spec = {
        "algebra": {"tensor": [{"matrix": 2}, {"matrix": 2}]},
        "form": "quantum",
        "hamiltonian": {"left": HALF_SIGMA_Z, "right": HALF_SIGMA_Z},
        "interaction": [{"left": SIGMA_X, "right": SIGMA_X}],
        "state": {"product": [
            {"density": [[1, 0], [0, 0]]},
            {"density": [[0.5, 0.5], [0.5, 0.5]]},
        ]},
    }
    spec = parse_spec(json.dumps(spec))
    system = build_system(spec, config)
    assert isinstance(system, CoupledSystem)
    assert system.parameter == pytest.approx(-1j, abs=1e-6)
    assert isinstance(build_state(spec, config), ProductState)


def test_custom_form_uses_default_basis(config) -> None:
    spec = {
        "algebra": {"matrix": 2},
        "form": {"degree": 2, "entries": [{"indices": [0, 1], "value": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}]},
    }
    structure = build_structure(parse_spec(json.dumps(spec)), config)
    assert structure.algebra.n == 2


def test_missing_state_returns_none(config) -> None:
    spec = {k: v for k, v in PRECESSION.items() if k != "state"}
    assert build_state(parse_spec(json.dumps(spec)), config) is None
