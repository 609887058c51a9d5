"""The universality parameter λ and the classification of product worlds.

For the Hamiltonian derivation of A⊗B on A₁ ⊗ A₂ to be a derivation, each
factor must satisfy λ{A,C} = [C,A] for all A, C.  On a commutative factor
the right side vanishes and λ = 0 is forced; on a quantum factor with
ω = −iħω_c the relation holds exactly for λ = iħ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..algebra.elements import AlgebraElement
from ..algebra.fibers import fibers
from ..algebra.operations import commutator
from ..algebra.sampling import random_element
from ..derivations.checks import DerivationCheck, check_derivation
from ..errors import NotSpecial
from ..symplectic.structures import SymplecticStructure, canonical_form, poisson_bracket
from .candidate import CertifiedDerivation
from .product import product_hamiltonian_candidate

BOTH_COMMUTATIVE = "BothCommutative"
BOTH_QUANTUM = "BothQuantum"
INCONSISTENT = "Inconsistent"

LAMBDA_INCONSISTENT = "lambda-inconsistent"
MIXED_CASE = "mixed-case"
NOT_DERIVATION = "not-derivation"

DEFAULT_LAMBDA_SAMPLES = 50
DEFAULT_LAMBDA_RELATIVE_TOLERANCE = 1e-8


def _aligned(x: AlgebraElement, y: AlgebraElement) -> Tuple[np.ndarray, np.ndarray]:
    """Fiber vectors of x and y over the union of their keys."""
    px, py = fibers(x), fibers(y)
    keys = sorted(set(px) | set(py))
    if not keys:
        return np.zeros(0, dtype=complex), np.zeros(0, dtype=complex)
    size = next(iter((px or py).values())).shape[0]
    zero = np.zeros(size, dtype=complex)
    return (
        np.concatenate([px.get(k, zero) for k in keys]),
        np.concatenate([py.get(k, zero) for k in keys]),
    )


@dataclass
class LambdaEstimate:
    """Least-squares λ from λ{A,C} = [C,A] over sampled pairs."""
    value: Optional[complex]
    relative_residual: float
    pairs_used: int
    pairs_skipped: int
    witness: Optional[Tuple[AlgebraElement, AlgebraElement]] = None

    @property
    def determined(self) -> bool:
        return self.value is not None


def extract_lambda(
    structure: SymplecticStructure,
    rng: np.random.Generator,
    samples: int = DEFAULT_LAMBDA_SAMPLES,
    focus: Optional[AlgebraElement] = None,
) -> LambdaEstimate:
    """λ·x = y with x = {A,C}, y = [C,A]; pairs with ‖x‖ < 10·tol are skipped.

    When ``focus`` is given, half of the pairs use it as A.
    """
    algebra = structure.algebra
    tol = algebra.tolerance
    xs: List[np.ndarray] = []
    ys: List[np.ndarray] = []
    pairs: List[Tuple[AlgebraElement, AlgebraElement]] = []
    skipped = 0
    for k in range(samples):
        a = focus if (focus is not None and k % 2 == 0) else random_element(algebra, rng, 2)
        c = random_element(algebra, rng, 2)
        x = poisson_bracket(structure, a, c)
        if x.norm() < 10 * tol:
            skipped += 1
            continue
        y = commutator(c, a)
        xv, yv = _aligned(x, y)
        xs.append(xv)
        ys.append(yv)
        pairs.append((a, c))
    if not xs:
        return LambdaEstimate(None, 0.0, 0, skipped)
    num = sum(np.vdot(x, y) for x, y in zip(xs, ys))
    den = sum(np.vdot(x, x).real for x in xs)
    lam = complex(num / den)
    worst, witness = 0.0, None
    for (a, c), x, y in zip(pairs, xs, ys):
        rel = float(np.linalg.norm(lam * x - y)) / max(float(np.linalg.norm(y)), float(np.linalg.norm(x)), 1.0)
        if rel > worst:
            worst, witness = rel, (a, c)
    return LambdaEstimate(lam, worst, len(xs), skipped, witness)


def _lambda_close(a: complex, b: complex, rel_tol: float) -> bool:
    return abs(a - b) <= rel_tol * max(1.0, abs(a), abs(b))


@dataclass
class WorldClassification:
    verdict: str
    lam: complex = 0j
    reason: str = ""
    evidence: Dict[str, Any] = field(default_factory=dict)

    @property
    def permitted(self) -> bool:
        return self.verdict != INCONSISTENT

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict, "reason": self.reason, "evidence": self.evidence}
        if self.permitted:
            out["lambda"] = [self.lam.real, self.lam.imag]
        return out


def _scaling_residual(structure: SymplecticStructure, lam: complex) -> float:
    """max entry norm of ω − (−λ)ω_c on the structure's own basis."""
    try:
        omega_c = canonical_form(structure.algebra, structure.basis)
    except NotSpecial:
        return float("inf")
    return structure.form.distance(omega_c.scale(-lam))


def classify_worlds(
    left: SymplecticStructure,
    right: SymplecticStructure,
    seed: int = 0,
    samples: int = DEFAULT_LAMBDA_SAMPLES,
    relative_tolerance: float = DEFAULT_LAMBDA_RELATIVE_TOLERANCE,
) -> WorldClassification:
    rng = np.random.default_rng(seed)
    left_comm = left.algebra.is_commutative
    right_comm = right.algebra.is_commutative
    if left_comm and right_comm:
        return WorldClassification(BOTH_COMMUTATIVE, 0j, "both factor algebras commute", {"lambda_left": 0.0, "lambda_right": 0.0})
    if left_comm != right_comm:
        quantum = right if left_comm else left
        est = extract_lambda(quantum, rng, samples)
        return WorldClassification(
            INCONSISTENT,
            reason="mixed: a commutative factor forces lambda = 0, the noncommutative factor does not allow it",
            evidence={
                "commutative_side": "left" if left_comm else "right",
                "lambda_noncommutative": _c(est.value),
            },
        )
    est_l = extract_lambda(left, rng, samples)
    est_r = extract_lambda(right, rng, samples)
    evidence: Dict[str, Any] = {
        "lambda_left": _c(est_l.value),
        "lambda_right": _c(est_r.value),
        "lambda_left_residual": est_l.relative_residual,
        "lambda_right_residual": est_r.relative_residual,
        "pairs_used": est_l.pairs_used + est_r.pairs_used,
    }
    if not (est_l.determined and est_r.determined):
        return WorldClassification(INCONSISTENT, reason="lambda undetermined: bracket vanishes on the sample", evidence=evidence)
    for name, est in (("left", est_l), ("right", est_r)):
        if est.relative_residual > relative_tolerance:
            return WorldClassification(INCONSISTENT, reason=f"{name} factor admits no single lambda", evidence=evidence)
    if not _lambda_close(est_l.value, est_r.value, relative_tolerance):
        return WorldClassification(INCONSISTENT, reason="factors require different lambda", evidence=evidence)
    lam = 0.5 * (est_l.value + est_r.value)
    if abs(lam) <= left.algebra.tolerance:
        return WorldClassification(INCONSISTENT, reason="noncommutative factors need lambda != 0", evidence=evidence)
    res_l, res_r = _scaling_residual(left, lam), _scaling_residual(right, lam)
    evidence["form_residual_left"] = res_l
    evidence["form_residual_right"] = res_r
    tol = max(left.algebra.tolerance, right.algebra.tolerance)
    if res_l > tol * max(1.0, left.form.norm()) or res_r > tol * max(1.0, right.form.norm()):
        return WorldClassification(INCONSISTENT, reason="a factor form is not -lambda times the canonical form", evidence=evidence)
    if abs(lam.real) > relative_tolerance * abs(lam):
        return WorldClassification(INCONSISTENT, reason="real forms need an imaginary lambda", evidence=evidence)
    return WorldClassification(BOTH_QUANTUM, lam, "both quantum with one shared lambda", evidence)


def _c(z: Optional[complex]):
    return None if z is None else [z.real, z.imag]


# ---------------------------------------------------------------------------
# Hamiltonian derivation ansatz
# ---------------------------------------------------------------------------

@dataclass
class ProductHamiltonian:
    derivation: CertifiedDerivation
    lam: complex
    check: DerivationCheck


@dataclass
class ProductFailure:
    stage: str
    witness: Optional[Tuple[AlgebraElement, ...]] = None
    residual: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)
    check: Optional[DerivationCheck] = None

    def to_dict(self) -> dict:
        from ..serialization import element_to_json

        out = {"stage": self.stage, "residual": self.residual, "details": self.details}
        if self.witness is not None:
            out["witness"] = [element_to_json(w) for w in self.witness]
        return out


def solve_product_hamiltonian(
    left: SymplecticStructure,
    right: SymplecticStructure,
    a: AlgebraElement,
    b: AlgebraElement,
    seed: int = 0,
    samples: int = DEFAULT_LAMBDA_SAMPLES,
    relative_tolerance: float = DEFAULT_LAMBDA_RELATIVE_TOLERANCE,
) -> Union[ProductHamiltonian, ProductFailure]:
    """Build Y for A⊗B, fix λ from both factors and certify Leibniz."""
    rng = np.random.default_rng(seed)
    est_l = extract_lambda(left, rng, samples, focus=a)
    est_r = extract_lambda(right, rng, samples, focus=b)
    details = {
        "lambda_left": _c(est_l.value),
        "lambda_right": _c(est_r.value),
        "lambda_left_residual": est_l.relative_residual,
        "lambda_right_residual": est_r.relative_residual,
    }
    def algebra_check(y):
        return check_derivation(y, y.algebra, seed=seed)

    for est in (est_l, est_r):
        if est.determined and est.relative_residual > relative_tolerance:
            return ProductFailure(LAMBDA_INCONSISTENT, est.witness, est.relative_residual, details)

    values = [e.value for e in (est_l, est_r) if e.determined]
    if len(values) == 2 and not _lambda_close(values[0], values[1], relative_tolerance):
        forced_zero = [e for e in (est_l, est_r) if abs(e.value) <= relative_tolerance]
        if forced_zero:
            # one factor forces λ = 0, the other needs λ ≠ 0: build the λ = 0 candidate anyway
            y = product_hamiltonian_candidate(left, right, 0.0, a, b)
            check = algebra_check(y)
            witness = forced_zero[0].witness
            return ProductFailure(
                MIXED_CASE,
                check.witness if check.witness is not None else witness,
                check.residual,
                {**details, "forced_zero_pair_side": "left" if forced_zero[0] is est_l else "right"},
                check,
            )
        return ProductFailure(
            LAMBDA_INCONSISTENT,
            (est_l.witness[0], est_r.witness[0]) if est_l.witness and est_r.witness else None,
            abs(values[0] - values[1]),
            details,
        )
    lam = values[0] if values else 0j
    y = product_hamiltonian_candidate(left, right, lam, a, b)
    check = algebra_check(y)
    if not check.is_derivation:
        return ProductFailure(NOT_DERIVATION, check.witness, check.residual, details, check)
    return ProductHamiltonian(CertifiedDerivation(y), lam, check)
