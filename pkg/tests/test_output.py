from __future__ import annotations

import json

import numpy as np
import pytest

from supmech.models import FAIL, PASS, CaseResult, SuiteReport
from supmech.output import csv_writer, json_writer, text_writer


def _report() -> SuiteReport:
    report = SuiteReport("tensor", 42, "1.0.0", target="poly:1,matrix:2")
    report.cases.append(CaseResult.measure("b-case", 0.1, 1e-9, witness={"x": 1}))
    report.cases.append(CaseResult.measure("a-case", 1e-12, 1e-9, witness={"x": 2}))
    report.cases.append(CaseResult.measure("mixed-jacobi", 2.0, 1e-7, expected_failure=True))
    report.sort_cases()
    return report


def test_case_measure() -> None:
    ok = CaseResult.measure("ok", 0.0, 1e-9, witness={"w": 1})
    bad = CaseResult.measure("bad", float("nan"), 1e-9, witness={"w": 1})
    assert ok.status == PASS and ok.witness is None
    assert bad.status == FAIL and bad.witness == {"w": 1}


def test_expected_failures_count_as_expected() -> None:
    report = _report()
    assert [c.name for c in report.cases] == ["a-case", "b-case", "mixed-jacobi"]
    assert [c.name for c in report.failed] == ["b-case"]
    assert not report.all_passed
    report.cases = [c for c in report.cases if c.name != "b-case"]
    assert report.all_passed


def test_json_is_deterministic_and_precise(tmp_path) -> None:
    report = _report()
    text = json_writer.dumps_report(report)
    assert text == json_writer.dumps_report(report)
    assert '"residual": 0.10000000000000001' in text
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert data["cases"][2]["expected_failure"] is True

    path = json_writer.write_report(report, str(tmp_path / "out" / "tensor.json"))
    loaded = json_writer.load_report(path)
    assert [c.name for c in loaded.cases] == [c.name for c in report.cases]
    assert loaded.cases[1].witness == {"x": 1}


def test_json_encodes_special_values() -> None:
    text = json_writer.dumps({"z": 1 + 2j, "n": float("inf"), "flag": np.bool_(True), "k": np.int64(3)})
    assert "Infinity" in text
    assert '"flag": true' in text
    assert '"k": 3' in text
    assert "2.0" in text


def test_csv_adds_imaginary_column_only_when_needed(tmp_path) -> None:
    times = np.array([0.0, 0.5, 1.0])
    real = ("sx", np.cos(times) + 0j)
    cplx = ("a", np.exp(1j * times))
    path = csv_writer.write_trajectory_csv(str(tmp_path / "traj.csv"), times, [real, cplx])
    header, table = csv_writer.read_trajectory_csv(path)
    assert header == ["time", "sx", "a", "im(a)"]
    assert table.shape == (3, 4)
    assert table[:, 1] == pytest.approx(np.cos(times))
    assert table[:, 3] == pytest.approx(np.sin(times))


def test_csv_rejects_ragged_columns(tmp_path) -> None:
    with pytest.raises(ValueError):
        csv_writer.write_trajectory_csv(str(tmp_path / "bad.csv"), [0.0, 1.0], [("x", [1.0])])


def test_text_report(tmp_path) -> None:
    report = _report()
    report.details["classification"] = {"verdict": "Inconsistent"}
    text = text_writer.render_report(report)
    assert text.startswith("# Suite: tensor")
    assert "| As expected | 2/3 |" in text
    assert "| mixed-jacobi | fail (expected) |" in text
    assert "- **verdict**: Inconsistent" in text
    path = text_writer.write_report_md(report, str(tmp_path / "tensor.md"))
    with open(path, encoding="utf-8") as fh:
        assert fh.read() == text
