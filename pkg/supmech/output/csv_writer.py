"""CSV output writer for trajectories."""

from __future__ import annotations

import csv
import os
from typing import List, Sequence, Tuple

import numpy as np

Column = Tuple[str, Sequence[complex]]


def trajectory_headers(columns: Sequence[Column], tolerance: float) -> List[Tuple[str, str, int]]:
    """(header, part, column index); an ``im(name)`` column only where |Im| exceeds tolerance."""
    headers = [("time", "time", -1)]
    for k, (name, values) in enumerate(columns):
        headers.append((name, "re", k))
        if np.max(np.abs(np.imag(np.asarray(values, dtype=complex))), initial=0.0) > tolerance:
            headers.append((f"im({name})", "im", k))
    return headers


def write_trajectory_csv(
    path: str,
    times: Sequence[float],
    columns: Sequence[Column],
    tolerance: float = 1e-10,
) -> str:
    """Write time plus one real column per tracked expectation."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    headers = trajectory_headers(columns, tolerance)
    data = [np.asarray(values, dtype=complex) for _, values in columns]
    for name, values in columns:
        if len(values) != len(times):
            raise ValueError(f"column {name!r} has {len(values)} rows, expected {len(times)}")

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([h for h, _, _ in headers])
        for row, t in enumerate(times):
            out = []
            for _, part, k in headers:
                if part == "time":
                    out.append(format(float(t), ".17g"))
                elif part == "re":
                    out.append(format(float(data[k][row].real), ".17g"))
                else:
                    out.append(format(float(data[k][row].imag), ".17g"))
            writer.writerow(out)

    return path


def read_trajectory_csv(path: str) -> Tuple[List[str], np.ndarray]:
    """Header and float table of a trajectory file."""
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, np.array(rows, dtype=float).reshape(len(rows), len(header))
