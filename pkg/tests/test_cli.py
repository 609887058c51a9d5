from __future__ import annotations

import json

import numpy as np
import pytest

from supmech.__main__ import EXIT_FORBIDDEN, EXIT_OK, EXIT_SPEC, main
from supmech.output.csv_writer import read_trajectory_csv

SIGMA_X = [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
HALF_SIGMA_Z = [[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("SUPMECH_TOLERANCE", raising=False)


def _write(path, data) -> str:
    path.write_text(json.dumps(data, indent=2), encoding="utf-8")
    return str(path)


def test_verify_tensor_json(capsys) -> None:
    code = main(["verify", "tensor", "--algebra", "poly:1,matrix:2", "--trials", "2", "-q", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert out["all_passed"] is True
    assert out["details"]["classification"]["verdict"] == "Inconsistent"


def test_verify_writes_output_directory(tmp_path, capsys) -> None:
    code = main(["verify", "symplectic", "--algebra", "poly:1", "--trials", "2", "-q", "--output", str(tmp_path / "out")])
    assert code == EXIT_OK
    assert (tmp_path / "out" / "symplectic.json").is_file()
    assert (tmp_path / "out" / "symplectic.md").is_file()
    assert json.loads(capsys.readouterr().out)["suite_name"] == "symplectic"


def test_tensor_jacobi_mixed_is_expected(capsys) -> None:
    code = main(["tensor", "jacobi", "--bracket", "symmetrized", "--case", "mixed", "-q", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert out["cases"][0]["status"] == "fail"
    assert out["cases"][0]["expected_failure"] is True


def test_tensor_classify(tmp_path, capsys) -> None:
    left = _write(tmp_path / "left.json", {"algebra": {"matrix": 2}, "form": "quantum"})
    right = _write(tmp_path / "right.json", {"algebra": {"matrix": 2}, "form": "quantum", "hbar": 2.0})
    code = main(["tensor", "classify", "--left", left, "--right", right, "-q", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert out["details"]["classification"]["verdict"] == "Inconsistent"


def test_precession_run(tmp_path, capsys) -> None:
    spec = _write(tmp_path / "precession.json", {
        "algebra": {"matrix": 2},
        "form": "quantum",
        "hamiltonian": HALF_SIGMA_Z,
        "state": {"density": [[0.5, 0.5], [0.5, 0.5]]},
        "track": [{"name": "sx", "value": SIGMA_X}],
        "evolution": {"t_end": 2, "dt": 1e-3, "record_every": 10},
    })
    out_csv = tmp_path / "traj.csv"
    code = main(["dynamics", "run", "--spec", spec, "--out", str(out_csv), "-q", "--format", "json"])
    report = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert report["details"]["rows"] == 201
    header, table = read_trajectory_csv(str(out_csv))
    assert header == ["time", "sx"]
    assert table[:, 1] == pytest.approx(np.cos(table[:, 0]), abs=1e-6)


def test_oscillator_run(tmp_path, capsys) -> None:
    spec = _write(tmp_path / "oscillator.json", {
        "algebra": {"polynomial": 1},
        "form": "classical",
        "hamiltonian": [{"exponents": [2, 0], "coeff": 0.5}, {"exponents": [0, 2], "coeff": 0.5}],
        "state": {"ensemble": [{"point": [1, 0], "weight": 1}]},
        "track": [{"name": "q", "value": [{"exponents": [1, 0], "coeff": 1}]}],
        "evolution": {"t_end": 3, "dt": 1e-3},
    })
    out_csv = tmp_path / "q.csv"
    assert main(["dynamics", "run", "--spec", spec, "--out", str(out_csv), "-q"]) == EXIT_OK
    capsys.readouterr()
    header, table = read_trajectory_csv(str(out_csv))
    assert header == ["time", "q"]
    assert table[:, 1] == pytest.approx(np.cos(table[:, 0]), abs=1e-6)


def test_mixed_coupling_exits_forbidden(tmp_path, capsys) -> None:
    spec = _write(tmp_path / "mixed.json", {
        "algebra": {"tensor": [{"polynomial": 1}, {"matrix": 2}]},
        "form": {"left": "classical", "right": "quantum"},
        "hamiltonian": {"left": [{"exponents": [0, 2], "coeff": 0.5}], "right": HALF_SIGMA_Z},
        "state": {"product": [{"ensemble": [{"point": [1, 0]}]}, {"density": [[1, 0], [0, 0]]}]},
    })
    code = main(["dynamics", "run", "--spec", spec, "--out", str(tmp_path / "x.csv"), "-q"])
    captured = capsys.readouterr()
    assert code == EXIT_FORBIDDEN
    error = json.loads(captured.out)
    assert error["error"] == "ForbiddenCoupling"
    assert "Error:" in captured.err
    assert not (tmp_path / "x.csv").exists()


def test_unknown_spec_key_exits_spec_error(tmp_path, capsys) -> None:
    spec = _write(tmp_path / "bad.json", {"algebra": {"matrix": 2}, "form": "quantum", "colour": "blue"})
    code = main(["dynamics", "run", "--spec", spec, "--out", str(tmp_path / "x.csv"), "-q"])
    assert code == EXIT_SPEC
    assert "colour" in capsys.readouterr().err


def test_bad_config_exits_spec_error(tmp_path, capsys) -> None:
    (tmp_path / "supmech.yaml").write_text("physics:\n  hbar: 0\n", encoding="utf-8")
    code = main(["tensor", "jacobi", "--bracket", "product", "--case", "quantum", "-q"])
    assert code == EXIT_SPEC
    assert "hbar" in capsys.readouterr().err


@pytest.mark.parametrize(
    "bracket, case, name",
    [
        ("eq81", "quantum", "product/quantum"),
        ("eq82", "mixed", "symmetrized/mixed"),
        ("eq86", "mixed", "mixed/mixed"),
    ],
)
def test_numbered_bracket_names(bracket, case, name, capsys) -> None:
    code = main(["tensor", "jacobi", "--bracket", bracket, "--case", case, "-q", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert out["cases"][0]["name"] == name


def test_product_bracket_on_mixed_worlds_is_forbidden(capsys) -> None:
    code = main(["tensor", "jacobi", "--bracket", "eq81", "--case", "mixed", "-q"])
    assert code == EXIT_FORBIDDEN
    assert json.loads(capsys.readouterr().out)["error"] == "UnclassifiedWorld"


def test_progress_goes_to_stderr(capsys) -> None:
    code = main(["tensor", "jacobi", "--bracket", "product", "--case", "commutative", "--format", "json"])
    captured = capsys.readouterr()
    assert code == EXIT_OK
    assert json.loads(captured.out)["suite_name"] == "tensor-jacobi"
    assert "[tensor] Jacobi" in captured.err


def test_help_documents_exit_codes(capsys) -> None:
    with pytest.raises(SystemExit) as info:
        main(["--help"])
    assert info.value.code == 0
    out = capsys.readouterr().out
    assert "exit codes:" in out
    assert "refused by the world classification" in out
