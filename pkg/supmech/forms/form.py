"""Differential forms stored by their values on increasing basis tuples."""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..algebra.elements import AlgebraElement, zero
from ..algebra.sampling import random_element
from ..derivations.basis import DerivationBasis
from ..derivations.derivation import Derivation
from ..errors import AlgebraMismatch, BasisMismatch

Index = Tuple[int, ...]


def permutation_sign(indices: Sequence[int]) -> Tuple[int, Index]:
    """(sign, sorted tuple); sign is 0 when an index repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, tuple(sorted(idx))
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


class DifferentialForm:
    """A Z(A)-multilinear antisymmetric p-cochain over a derivation basis."""

    __slots__ = ("degree", "basis", "_entries")

    def __init__(
        self,
        degree: int,
        basis: DerivationBasis,
        entries: Optional[Mapping[Index, AlgebraElement]] = None,
    ):
        if degree < 0:
            raise ValueError(f"form degree must be nonnegative, got {degree}")
        self.degree = degree
        self.basis = basis
        clean: Dict[Index, AlgebraElement] = {}
        for key, value in (entries or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise ValueError(f"index {key} does not have {degree} entries")
            if value.algebra != basis.algebra:
                raise AlgebraMismatch(f"entry in {value.algebra.label}, basis on {basis.algebra.label}")
            sign, ordered = permutation_sign(key)
            if sign == 0:
                continue
            if any(i < 0 or i >= basis.size for i in ordered):
                raise IndexError(f"index {key} out of range for a basis of size {basis.size}")
            term = value if sign > 0 else value.scale(-1.0)
            clean[ordered] = clean[ordered] + term if ordered in clean else term
        self._entries = {k: v for k, v in clean.items() if v.norm() != 0.0}

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero_form(cls, degree: int, basis: DerivationBasis) -> "DifferentialForm":
        return cls(degree, basis)

    @classmethod
    def function(cls, element: AlgebraElement, basis: DerivationBasis) -> "DifferentialForm":
        """The 0-form A."""
        return cls(0, basis, {(): element})

    @classmethod
    def from_callable(cls, degree: int, basis: DerivationBasis, values) -> "DifferentialForm":
        """Build from ``values(index_tuple) -> AlgebraElement`` on increasing tuples."""
        return cls(degree, basis, {idx: values(idx) for idx in increasing_tuples(basis.size, degree)})

    # -- access --------------------------------------------------------------

    @property
    def algebra(self):
        return self.basis.algebra

    def entries(self) -> Iterator[Tuple[Index, AlgebraElement]]:
        return iter(sorted(self._entries.items()))

    def value(self, indices: Sequence[int]) -> AlgebraElement:
        """Value on basis derivations in any order (antisymmetric extension)."""
        if len(indices) != self.degree:
            raise ValueError(f"{self.degree}-form evaluated on {len(indices)} arguments")
        sign, ordered = permutation_sign(indices)
        if sign == 0 or ordered not in self._entries:
            return zero(self.algebra)
        val = self._entries[ordered]
        return val if sign > 0 else val.scale(-1.0)

    def as_element(self) -> AlgebraElement:
        if self.degree != 0:
            raise ValueError("only 0-forms are algebra elements")
        return self.value(())

    def evaluate(self, *derivations: Derivation) -> AlgebraElement:
        """ω(X₁..X_p) by Z(A)-multilinear expansion of the arguments."""
        if len(derivations) != self.degree:
            raise ValueError(f"{self.degree}-form evaluated on {len(derivations)} arguments")
        coeffs = [self.basis.expand(x) for x in derivations]
        return self.evaluate_coefficients(coeffs)

    def evaluate_coefficients(self, coeffs: Sequence[Sequence[AlgebraElement]]) -> AlgebraElement:
        if self.degree == 0:
            return self.value(())
        support = [[(k, c) for k, c in enumerate(cs) if c.norm() > 0.0] for cs in coeffs]
        total = zero(self.algebra)
        for combo in itertools.product(*support):
            idx = tuple(k for k, _ in combo)
            val = self.value(idx)
            if val.norm() == 0.0:
                continue
            for _, c in combo:
                val = c * val
            total = total + val
        return total

    # -- arithmetic ----------------------------------------------------------

    def _same(self, other: "DifferentialForm") -> None:
        self.basis.check_compatible(other.basis)
        if other.degree != self.degree:
            raise BasisMismatch(f"degrees differ: {self.degree} vs {other.degree}")

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._same(other)
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out[k] + v if k in out else v
        return DifferentialForm(self.degree, self.basis, out)

    def __neg__(self) -> "DifferentialForm":
        return self.scale(-1.0)

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        return self + other.scale(-1.0)

    def scale(self, z: complex) -> "DifferentialForm":
        return DifferentialForm(self.degree, self.basis, {k: v.scale(z) for k, v in self._entries.items()})

    def multiply(self, element: AlgebraElement) -> "DifferentialForm":
        """(Aω)(X…) = A·ω(X…)."""
        return DifferentialForm(self.degree, self.basis, {k: element * v for k, v in self._entries.items()})

    def distance(self, other: "DifferentialForm") -> float:
        """Max entry norm of the difference."""
        diff = self - other
        return max((v.norm() for _, v in diff.entries()), default=0.0)

    def norm(self) -> float:
        return max((v.norm() for v in self._entries.values()), default=0.0)

    def is_close(self, other: "DifferentialForm", tolerance: Optional[float] = None) -> bool:
        tol = self.algebra.tolerance if tolerance is None else tolerance
        return self.distance(other) <= tol

    def is_zero(self, tolerance: Optional[float] = None) -> bool:
        tol = self.algebra.tolerance if tolerance is None else tolerance
        return self.norm() <= tol

    def __repr__(self) -> str:
        return f"DifferentialForm(degree={self.degree}, basis={self.basis.kind}, entries={len(self._entries)})"


def increasing_tuples(m: int, p: int) -> Iterable[Index]:
    return itertools.combinations(range(m), p)


def random_form(
    basis: DerivationBasis,
    degree: int,
    rng: np.random.Generator,
    max_degree: int = 2,
) -> DifferentialForm:
    """Seeded random p-form; every increasing tuple gets a random entry."""
    entries = {
        idx: random_element(basis.algebra, rng, max_degree)
        for idx in increasing_tuples(basis.size, degree)
    }
    return DifferentialForm(degree, basis, entries)


def coordinate_one_form(basis: DerivationBasis, index: int) -> DifferentialForm:
    """The 1-form dual to the index-th basis derivation (dξᵃ on coordinate bases)."""
    from ..algebra.elements import unit

    return DifferentialForm(1, basis, {(index,): unit(basis.algebra)})


def form_matrix(form: DifferentialForm) -> List[List[AlgebraElement]]:
    """Full antisymmetric matrix of a 2-form's values."""
    if form.degree != 2:
        raise ValueError("form_matrix needs a 2-form")
    m = form.basis.size
    return [[form.value((i, j)) for j in range(m)] for i in range(m)]
