"""Markdown summary writer."""

from __future__ import annotations

import os
from typing import List

from ..models import SuiteReport


def _num(x: float) -> str:
    return f"{x:.3e}"


def render_report(report: SuiteReport) -> str:
    """Human-readable summary: header table, then one row per case."""
    lines: List[str] = []
    passed = sum(1 for c in report.cases if c.as_expected)

    lines.append(f"# Suite: {report.suite_name}\n")
    lines.append("| Parameter | Value |")
    lines.append("|---|---|")
    if report.target:
        lines.append(f"| Target | `{report.target}` |")
    lines.append(f"| Seed | {report.seed} |")
    lines.append(f"| Version | {report.tool_version} |")
    lines.append(f"| Cases | {len(report.cases)} |")
    lines.append(f"| As expected | {passed}/{len(report.cases)} |")
    lines.append(f"| Wall time (ms) | {report.wall_time_ms:.0f} |")
    lines.append("")

    if report.cases:
        lines.append("## Cases\n")
        lines.append("| Case | Status | Residual | Tolerance |")
        lines.append("|---|---|---:|---:|")
        for c in report.cases:
            status = c.status
            if c.expected_failure:
                status += " (expected)" if not c.passed else " (unexpected)"
            lines.append(f"| {c.name} | {status} | {_num(c.residual)} | {_num(c.tolerance)} |")
        lines.append("")

    for key in sorted(report.details):
        value = report.details[key]
        if isinstance(value, dict):
            lines.append(f"## {key}\n")
            for k in sorted(value):
                lines.append(f"- **{k}**: {value[k]}")
            lines.append("")
        else:
            lines.append(f"- **{key}**: {value}")

    return "\n".join(lines).rstrip() + "\n"


def write_report_md(report: SuiteReport, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_report(report))
    return path
