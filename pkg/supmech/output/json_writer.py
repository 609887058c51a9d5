"""JSON output writer.

Reports are written with sorted keys and every float printed with 17
significant digits, so identical runs diff byte for byte apart from
``wall_time_ms``.
"""

from __future__ import annotations

import json
import math
import os
from typing import Any

import numpy as np

from ..models import SuiteReport


def _float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    if not any(c in text for c in ".eEn"):
        text += ".0"
    return text


def _encode(value: Any, level: int) -> str:
    pad = "  " * (level + 1)
    end = "  " * level
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_encode(value[k], level + 1)}"
            for k in sorted(value, key=str)
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{pad}{_encode(v, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _float(float(value))
    if isinstance(value, complex):
        return _encode([value.real, value.imag], level)
    if value is None:
        return "null"
    return json.dumps(str(value), ensure_ascii=False)


def dumps(data: Any) -> str:
    return _encode(data, 0) + "\n"


def dumps_report(report: SuiteReport) -> str:
    return dumps(report.to_dict())


def write_report(report: SuiteReport, path: str) -> str:
    """Write a suite report to *path*; returns the path."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_report(report))
    return path


def write_json(data: Any, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(data))
    return path


def load_report(path: str) -> SuiteReport:
    with open(path, "r", encoding="utf-8") as fh:
        return SuiteReport.from_dict(json.load(fh))
