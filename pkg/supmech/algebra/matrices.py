"""Named matrices: Pauli, generalized Gell-Mann and spin-s generators."""

from __future__ import annotations

from typing import List, Tuple

import numpy as np

from .descriptors import DEFAULT_TOLERANCE, AlgebraDescriptor, matrix_algebra
from .elements import AlgebraElement

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def pauli(algebra: AlgebraDescriptor | None = None) -> Tuple[AlgebraElement, AlgebraElement, AlgebraElement]:
    """(σx, σy, σz) as Matrix(2) elements."""
    algebra = algebra or matrix_algebra(2)
    return tuple(AlgebraElement(algebra, s) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))


def gellmann(j: int, k: int, d: int) -> np.ndarray:
    r"""Generalized Gell-Mann matrix of dimension d (1-based indices).

    Symmetric for j < k, antisymmetric for j > k, diagonal for j == k < d and
    the identity for j == k == d.  Trace-free members have Tr(g g) = 2.
    """
    g = np.zeros((d, d), dtype=complex)
    if j < k:
        g[j - 1, k - 1] = 1
        g[k - 1, j - 1] = 1
    elif j > k:
        g[k - 1, j - 1] = -1j
        g[j - 1, k - 1] = 1j
    elif j < d:
        diag = [1.0] * j + [-float(j)] + [0.0] * (d - j - 1)
        g[np.arange(d), np.arange(d)] = np.sqrt(2.0 / (j * (j + 1))) * np.array(diag)
    else:
        g = np.eye(d, dtype=complex)
    return g


def gellmann_generators(d: int) -> List[np.ndarray]:
    """The d²−1 trace-free generators: symmetric, antisymmetric, diagonal.

    For d = 2 this is (σx, σy, σz).
    """
    sym = [gellmann(j, k, d) for j in range(1, d + 1) for k in range(j + 1, d + 1)]
    anti = [gellmann(k, j, d) for j in range(1, d + 1) for k in range(j + 1, d + 1)]
    diag = [gellmann(j, j, d) for j in range(1, d)]
    out = []
    for s, a in zip(sym, anti):
        out.extend([s, a])
    return out + diag


def spin_matrices(s: float, tolerance: float = DEFAULT_TOLERANCE) -> Tuple[AlgebraElement, AlgebraElement, AlgebraElement]:
    """Spin-s matrices (S1, S2, S3) with ħ = 1, dimension 2s+1."""
    dim = int(round(2 * s + 1))
    if dim < 1 or abs(dim - (2 * s + 1)) > 1e-12:
        raise ValueError(f"spin must be a non-negative half integer, got {s}")
    ms = s - np.arange(dim)
    splus = np.zeros((dim, dim), dtype=complex)
    for i in range(1, dim):
        m = ms[i]
        splus[i - 1, i] = np.sqrt(s * (s + 1) - m * (m + 1))
    sminus = splus.conj().T
    algebra = matrix_algebra(dim, tolerance)
    s1 = (splus + sminus) / 2
    s2 = (splus - sminus) / 2j
    s3 = np.diag(ms).astype(complex)
    return tuple(AlgebraElement(algebra, m) for m in (s1, s2, s3))
