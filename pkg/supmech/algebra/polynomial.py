"""Sparse multivariate polynomials with complex coefficients.

Variables are ordered ξ = (q¹..qⁿ, p₁..pₙ); a polynomial on ``nvars``
variables maps exponent tuples of length ``nvars`` to complex coefficients.
Exactly-zero coefficients are pruned on construction.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

import numpy as np

Exponent = Tuple[int, ...]


class Polynomial:
    """Immutable sparse polynomial."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, complex] | None = None):
        self.nvars = nvars
        cleaned: Dict[Exponent, complex] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent {exps} does not have {nvars} entries")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = complex(coeff)
            if c != 0:
                cleaned[exps] = cleaned.get(exps, 0j) + c
        self._terms = {k: v for k, v in cleaned.items() if v != 0}

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, nvars: int, value: complex) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int, coeff: complex = 1.0) -> "Polynomial":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): coeff})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: complex = 1.0) -> "Polynomial":
        return cls(len(exps), {tuple(exps): coeff})

    # -- access --------------------------------------------------------------

    @property
    def terms(self) -> Dict[Exponent, complex]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, complex]]:
        return iter(sorted(self._terms.items()))

    def coefficient(self, exps: Exponent) -> complex:
        return self._terms.get(tuple(exps), 0j)

    def degree(self) -> int:
        if not self._terms:
            return 0
        return max(sum(e) for e in self._terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def constant_term(self) -> complex:
        return self._terms.get((0,) * self.nvars, 0j)

    def norm(self) -> float:
        """Max coefficient modulus."""
        if not self._terms:
            return 0.0
        return max(abs(c) for c in self._terms.values())

    def __len__(self) -> int:
        return len(self._terms)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0j) + v
        return Polynomial(self.nvars, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, z: complex) -> "Polynomial":
        if z == 0:
            return Polynomial(self.nvars)
        return Polynomial(self.nvars, {k: z * v for k, v in self._terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out: Dict[Exponent, complex] = {}
        for ka, va in self._terms.items():
            for kb, vb in other._terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                out[k] = out.get(k, 0j) + va * vb
        return Polynomial(self.nvars, out)

    def power(self, k: int) -> "Polynomial":
        result = Polynomial.constant(self.nvars, 1.0)
        for _ in range(k):
            result = result * self
        return result

    def conjugate(self) -> "Polynomial":
        return Polynomial(self.nvars, {k: v.conjugate() for k, v in self._terms.items()})

    def derivative(self, index: int) -> "Polynomial":
        out: Dict[Exponent, complex] = {}
        for exps, c in self._terms.items():
            e = exps[index]
            if e == 0:
                continue
            new = list(exps)
            new[index] = e - 1
            out[tuple(new)] = out.get(tuple(new), 0j) + e * c
        return Polynomial(self.nvars, out)

    def gradient(self) -> Tuple["Polynomial", ...]:
        return tuple(self.derivative(a) for a in range(self.nvars))

    def evaluate(self, point: Sequence[complex]) -> complex:
        point = np.asarray(point, dtype=complex)
        total = 0j
        for exps, c in self._terms.items():
            total += c * complex(np.prod(point ** np.asarray(exps)))
        return total

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at each row of ``points`` (shape (k, nvars))."""
        points = np.asarray(points, dtype=complex)
        out = np.zeros(points.shape[0], dtype=complex)
        for exps, c in self._terms.items():
            out += c * np.prod(points ** np.asarray(exps), axis=1)
        return out

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Compose: replace variable a by ``images[a]``."""
        if len(images) != self.nvars:
            raise ValueError("one image per variable required")
        target_vars = images[0].nvars if images else self.nvars
        result = Polynomial(target_vars)
        cache: Dict[Tuple[int, int], Polynomial] = {}
        for exps, c in self._terms.items():
            term = Polynomial.constant(target_vars, c)
            for a, e in enumerate(exps):
                if e:
                    key = (a, e)
                    if key not in cache:
                        cache[key] = images[a].power(e)
                    term = term * cache[key]
            result = result + term
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.nvars, tuple(sorted(self._terms.items(), key=lambda kv: kv[0]))))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.items():
            mono = "*".join(
                f"x{a}" + (f"^{e}" if e > 1 else "") for a, e in enumerate(exps) if e
            )
            parts.append(f"({c:.6g})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def monomials_up_to(nvars: int, max_degree: int) -> Iterable[Exponent]:
    """Exponent tuples of total degree <= max_degree, graded-lex order."""
    for degree in range(max_degree + 1):
        yield from _compositions(nvars, degree)


def _compositions(nvars: int, total: int) -> Iterator[Exponent]:
    if nvars == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(nvars - 1, total - first):
            yield (first,) + rest
