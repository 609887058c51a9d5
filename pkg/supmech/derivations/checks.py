"""Leibniz-rule certification of linear maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.descriptors import AlgebraDescriptor
from ..algebra.elements import AlgebraElement
from ..algebra.sampling import random_element, unit_basis

IS_DERIVATION = "IsDerivation"
LEIBNIZ_VIOLATION = "LeibnizViolation"

LinearMap = Callable[[AlgebraElement], AlgebraElement]


@dataclass
class DerivationCheck:
    """Outcome of ``check_derivation``; a violation is a result, not an error."""
    is_derivation: bool
    residual: float
    pairs_checked: int
    witness: Optional[Tuple[AlgebraElement, AlgebraElement]] = None
    linear: bool = True
    linearity_residual: float = 0.0

    @property
    def status(self) -> str:
        return IS_DERIVATION if self.is_derivation else LEIBNIZ_VIOLATION

    def to_dict(self) -> dict:
        from ..serialization import element_to_json

        out = {
            "status": self.status,
            "residual": self.residual,
            "pairs_checked": self.pairs_checked,
            "linear": self.linear,
            "linearity_residual": self.linearity_residual,
        }
        if self.witness is not None:
            out["witness"] = [element_to_json(w) for w in self.witness]
        return out


def leibniz_sample(
    algebra: AlgebraDescriptor,
    seed: int = 0,
    random_pairs: int = 20,
    min_pairs: int = 50,
) -> List[Tuple[AlgebraElement, AlgebraElement]]:
    """All pairs of spanning elements, then seeded random pairs up to ``min_pairs``.

    Tensor algebras with a polynomial factor use degree ≤ 1 units so the
    pair count stays manageable.
    """
    has_poly = algebra.is_polynomial or (
        algebra.is_tensor and (algebra.left.is_polynomial or algebra.right.is_polynomial)
    )
    degree = 1 if algebra.is_tensor and has_poly else 2
    units = unit_basis(algebra, degree)
    pairs = [(a, b) for a in units for b in units]
    rng = np.random.default_rng(seed)
    extra = max(random_pairs, min_pairs - len(pairs))
    for _ in range(extra):
        pairs.append((random_element(algebra, rng, 2), random_element(algebra, rng, 2)))
    return pairs


def check_derivation(
    mapping: LinearMap,
    algebra: AlgebraDescriptor,
    seed: int = 0,
    random_pairs: int = 20,
    min_pairs: int = 50,
    tolerance: Optional[float] = None,
    pairs: Optional[Sequence[Tuple[AlgebraElement, AlgebraElement]]] = None,
) -> DerivationCheck:
    """Test ‖L(ab) − L(a)b − aL(b)‖ on a deterministic sample.

    The residual of each pair is compared with ``tolerance`` scaled by the
    size of the terms, so large sample elements do not trip on rounding.
    The worst pair (relative to that scale) is kept as witness.
    """
    tol = algebra.tolerance if tolerance is None else tolerance
    sample = list(pairs) if pairs is not None else leibniz_sample(algebra, seed, random_pairs, min_pairs)
    worst_ratio, worst_residual, witness = 0.0, 0.0, None
    for a, b in sample:
        la, lb = mapping(a), mapping(b)
        lhs = mapping(a * b)
        rhs = la * b + a * lb
        residual = (lhs - rhs).norm()
        scale = max(1.0, (la * b).norm() + (a * lb).norm(), lhs.norm())
        ratio = residual / (tol * scale)
        if ratio > worst_ratio:
            worst_ratio, worst_residual, witness = ratio, residual, (a, b)
    linear, lin_residual = _linearity(mapping, algebra, seed, tol)
    ok = worst_ratio <= 1.0 and linear
    return DerivationCheck(
        is_derivation=ok,
        residual=worst_residual,
        pairs_checked=len(sample),
        witness=None if worst_ratio <= 1.0 else witness,
        linear=linear,
        linearity_residual=lin_residual,
    )


def _linearity(mapping: LinearMap, algebra: AlgebraDescriptor, seed: int, tol: float) -> Tuple[bool, float]:
    rng = np.random.default_rng(seed + 1)
    worst = 0.0
    ok = True
    for _ in range(3):
        a, b = random_element(algebra, rng), random_element(algebra, rng)
        alpha = complex(rng.normal(), rng.normal())
        beta = complex(rng.normal(), rng.normal())
        lhs = mapping(a.scale(alpha) + b.scale(beta))
        rhs = mapping(a).scale(alpha) + mapping(b).scale(beta)
        residual = (lhs - rhs).norm()
        worst = max(worst, residual)
        if residual > tol * max(1.0, rhs.norm()):
            ok = False
    return ok, worst


def infinitesimal_generator_residual(
    family: Callable[[float], Callable[[AlgebraElement], AlgebraElement]],
    algebra: AlgebraDescriptor,
    step: float = 1e-5,
    seed: int = 0,
    tolerance: float = 1e-6,
) -> DerivationCheck:
    """Leibniz check of g = d/dt Φ_t |_(t=0) by central differences.

    ``family(t)`` must return the automorphism Φ_t.  The finite-difference
    error is O(step²), so the tolerance here is looser than the algebra's.
    """
    forward, backward = family(step), family(-step)

    def generator(a: AlgebraElement) -> AlgebraElement:
        return (forward(a) - backward(a)).scale(1.0 / (2 * step))

    return check_derivation(generator, algebra, seed=seed, tolerance=tolerance)
