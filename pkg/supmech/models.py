"""Data models for verification reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

PASS = "pass"
FAIL = "fail"


# ---------------------------------------------------------------------------
# Case-level results
# ---------------------------------------------------------------------------

@dataclass
class CaseResult:
    name: str
    status: str  # pass | fail
    residual: float
    tolerance: float
    witness: Optional[Any] = None  # serialized elements, required on failures
    details: Dict[str, Any] = field(default_factory=dict)
    expected_failure: bool = False  # theorem-enforcing cases that must fail

    @classmethod
    def measure(
        cls,
        name: str,
        residual: float,
        tolerance: float,
        witness: Optional[Any] = None,
        details: Optional[Dict[str, Any]] = None,
        expected_failure: bool = False,
    ) -> "CaseResult":
        """Pass iff residual <= tolerance; the witness is kept only on failure."""
        ok = math.isfinite(residual) and residual <= tolerance
        return cls(
            name=name,
            status=PASS if ok else FAIL,
            residual=float(residual),
            tolerance=float(tolerance),
            witness=None if ok else witness,
            details=dict(details or {}),
            expected_failure=expected_failure,
        )

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def as_expected(self) -> bool:
        return self.passed != self.expected_failure

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "status": self.status,
            "residual": self.residual,
            "tolerance": self.tolerance,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        if self.expected_failure:
            out["expected_failure"] = True
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CaseResult":
        return cls(
            name=data["name"],
            status=data["status"],
            residual=float(data["residual"]),
            tolerance=float(data["tolerance"]),
            witness=data.get("witness"),
            details=dict(data.get("details", {})),
            expected_failure=bool(data.get("expected_failure", False)),
        )


# ---------------------------------------------------------------------------
# Suite-level report
# ---------------------------------------------------------------------------

@dataclass
class SuiteReport:
    suite_name: str
    seed: int
    tool_version: str
    target: str = ""  # algebra label(s) or spec name
    cases: List[CaseResult] = field(default_factory=list)
    wall_time_ms: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)

    def sort_cases(self) -> None:
        self.cases.sort(key=lambda c: c.name)

    @property
    def all_passed(self) -> bool:
        """Exit-code view: every case passed, or failed where a failure is required."""
        return all(c.as_expected for c in self.cases)

    @property
    def failed(self) -> List[CaseResult]:
        return [c for c in self.cases if not c.as_expected]

    def to_dict(self) -> dict:
        return {
            "suite_name": self.suite_name,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "target": self.target,
            "cases": [c.to_dict() for c in self.cases],
            "wall_time_ms": self.wall_time_ms,
            "details": self.details,
            "all_passed": self.all_passed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteReport":
        return cls(
            suite_name=data["suite_name"],
            seed=int(data["seed"]),
            tool_version=data["tool_version"],
            target=data.get("target", ""),
            cases=[CaseResult.from_dict(c) for c in data.get("cases", [])],
            wall_time_ms=float(data.get("wall_time_ms", 0.0)),
            details=dict(data.get("details", {})),
        )
