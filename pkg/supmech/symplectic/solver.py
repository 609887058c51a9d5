"""Linear solve of i_Y ω = −dA over central coefficients.

Writing Y = Σₖ cₖXₖ, the equations are Σₖ cₖ ω(Xₖ, Xⱼ) = −Xⱼ(A) for every
basis index j.  When the form's values lie in the constant fiber the system
splits per central monomial into copies of one scalar matrix, which is
factorized once by SVD.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
import scipy.linalg

from ..algebra.elements import AlgebraElement
from ..algebra.fibers import FiberKey, central_element, fiber_dim, fibers
from ..errors import NonDegeneracyFailure, NotUnique, UnsupportedForm
from ..forms.form import DifferentialForm

DEFAULT_RANK_THRESHOLD = 1e-8


@dataclass
class SolveResult:
    coefficients: Tuple[AlgebraElement, ...]
    residual: float


class FormSolver:
    """Factorized map from derivation coordinates to 1-form coordinates."""

    def __init__(self, form: DifferentialForm, rank_threshold: float = DEFAULT_RANK_THRESHOLD):
        if form.degree != 2:
            raise UnsupportedForm(f"Hamiltonian solves need a 2-form, got degree {form.degree}")
        self.form = form
        self.basis = form.basis
        self.algebra = form.algebra
        self.rank_threshold = rank_threshold
        m = self.basis.size
        self._fdim = fiber_dim(self.algebra)
        blocks = np.zeros((m * self._fdim, m), dtype=complex)
        for k in range(m):
            for j in range(m):
                parts = fibers(form.value((k, j)))
                if any(any(key) for key in parts):
                    raise UnsupportedForm(
                        "form values must be constant over the center",
                        {"entry": [k, j]},
                    )
                if parts:
                    blocks[j * self._fdim:(j + 1) * self._fdim, k] = next(iter(parts.values()))
        self.matrix = blocks
        if m:
            u, s, vh = scipy.linalg.svd(blocks, full_matrices=False)
            top = float(s[0])
            keep = s > rank_threshold * top if top > 0 else np.zeros(s.shape, dtype=bool)
            self.singular_values = s
            self.rank = int(np.count_nonzero(keep))
            inv_s = np.where(keep, 1.0 / np.where(keep, s, 1.0), 0.0)
            self._pinv = (vh.conj().T * inv_s) @ u.conj().T
        else:
            self.singular_values = np.zeros(0)
            self.rank = 0
            self._pinv = np.zeros((0, 0), dtype=complex)

    @property
    def dimension(self) -> int:
        return self.basis.size

    @property
    def kernel_dimension(self) -> int:
        return self.dimension - self.rank

    @property
    def full_rank(self) -> bool:
        return self.rank == self.dimension

    def solve(self, rhs: List[AlgebraElement]) -> SolveResult:
        """Coefficients c with Σₖ cₖ ω(Xₖ, Xⱼ) = rhs[j]."""
        if not self.full_rank:
            raise NotUnique(
                "form is degenerate on the derivation space",
                {"kernel_dimension": self.kernel_dimension, "rank": self.rank},
            )
        keys: List[FiberKey] = []
        index: Dict[FiberKey, int] = {}
        split = [fibers(r) for r in rhs]
        for parts in split:
            for key in parts:
                if key not in index:
                    index[key] = len(keys)
                    keys.append(key)
        m = self.dimension
        if not keys:
            zero_coeffs = tuple(central_element(self.algebra, {}) for _ in range(m))
            return SolveResult(zero_coeffs, 0.0)
        b = np.zeros((m * self._fdim, len(keys)), dtype=complex)
        for j, parts in enumerate(split):
            for key, vec in parts.items():
                b[j * self._fdim:(j + 1) * self._fdim, index[key]] = vec
        z = self._pinv @ b
        residual = float(np.linalg.norm(self.matrix @ z - b))
        if residual > self.algebra.tolerance * max(1.0, float(np.linalg.norm(b))):
            raise NonDegeneracyFailure(
                "no derivation in the space solves i_Y ω = −dA",
                {"residual": residual},
            )
        coeffs = tuple(
            central_element(self.algebra, {key: z[k, idx] for idx, key in enumerate(keys)})
            for k in range(m)
        )
        return SolveResult(coeffs, residual)
