"""States as positive normalized functionals, per backend.

Matrix algebras (and Matrix ⊗ Matrix, through the Kronecker flattening)
carry density matrices; commutative phase-space algebras carry weighted
point ensembles.  A ProductState pairs one state per tensor factor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from ..algebra.descriptors import AlgebraDescriptor, tensor_algebra
from ..algebra.elements import AlgebraElement, coordinate, from_flat
from ..algebra.sampling import random_element, unit_basis
from ..errors import AlgebraMismatch, NotIsomorphism
from ..symplectic.morphisms import (
    AlgebraMorphism,
    ComposedMorphism,
    IdentityMorphism,
    PolynomialSubstitution,
    UnitaryConjugation,
)
from ..symplectic.structures import SymplecticStructure, poisson_bracket


def is_phase_space(algebra: AlgebraDescriptor) -> bool:
    return algebra.is_polynomial or (
        algebra.is_tensor and algebra.left.is_polynomial and algebra.right.is_polynomial
    )


def phase_dimension(algebra: AlgebraDescriptor) -> int:
    if algebra.is_polynomial:
        return algebra.nvars
    return algebra.left.nvars + algebra.right.nvars


class DensityMatrix:
    """ρ on Matrix(n) or Matrix(n) ⊗ Matrix(m) (flattened, nm × nm)."""

    def __init__(self, algebra: AlgebraDescriptor, rho: np.ndarray):
        if not (algebra.is_matrix or algebra.is_matrix_product):
            raise AlgebraMismatch(f"density matrices live on matrix algebras, got {algebra.label}")
        rho = np.asarray(rho, dtype=complex)
        dim = algebra.flat_dim
        if rho.shape != (dim, dim):
            raise ValueError(f"density matrix has shape {rho.shape}, expected ({dim}, {dim})")
        self.algebra = algebra
        self.rho = rho

    @classmethod
    def pure(cls, algebra: AlgebraDescriptor, vector: Sequence[complex]) -> "DensityMatrix":
        v = np.asarray(vector, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(algebra, np.outer(v, v.conj()))

    def expectation(self, a: AlgebraElement) -> complex:
        return complex(np.trace(self.rho @ a.flatten()))

    def as_element(self) -> AlgebraElement:
        return from_flat(self.algebra, self.rho)

    def __repr__(self):
        return f"DensityMatrix({self.algebra.label}, {np.round(self.rho, 6).tolist()})"


class PhaseEnsemble:
    """Σ pᵢ δ(ξ − ξᵢ): weighted Dirac measures on phase space."""

    def __init__(self, algebra: AlgebraDescriptor, points, weights: Optional[Sequence[float]] = None):
        if not is_phase_space(algebra):
            raise AlgebraMismatch(f"phase ensembles live on commutative phase-space algebras, got {algebra.label}")
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != phase_dimension(algebra):
            raise ValueError(f"points have dimension {pts.shape[1]}, expected {phase_dimension(algebra)}")
        w = np.full(len(pts), 1.0 / len(pts)) if weights is None else np.asarray(weights, dtype=float)
        if w.shape != (len(pts),):
            raise ValueError("one weight per point is required")
        self.algebra = algebra
        self.points = pts
        self.weights = w

    @classmethod
    def point(cls, algebra: AlgebraDescriptor, xi: Sequence[float]) -> "PhaseEnsemble":
        return cls(algebra, [list(xi)], [1.0])

    def expectation(self, a: AlgebraElement) -> complex:
        if a.algebra.is_polynomial:
            values = a.polynomial.evaluate_many(self.points)
        else:
            values = np.array([a.evaluate(x) for x in self.points])
        return complex(np.dot(self.weights, values))

    def with_points(self, points: np.ndarray) -> "PhaseEnsemble":
        return PhaseEnsemble(self.algebra, points, self.weights)

    def __repr__(self):
        return f"PhaseEnsemble({self.algebra.label}, {len(self.points)} points)"


@dataclass
class ProductState:
    left: "StateFunctional"
    right: "StateFunctional"

    @property
    def algebra(self) -> AlgebraDescriptor:
        return tensor_algebra(self.left.algebra, self.right.algebra)

    def expectation(self, a: AlgebraElement) -> complex:
        total = 0j
        for x, y in a.pairs():
            total += self.left.expectation(x) * self.right.expectation(y)
        return total

    def joint(self) -> Union[DensityMatrix, PhaseEnsemble]:
        """The same functional as a single density matrix or ensemble."""
        algebra = self.algebra
        if isinstance(self.left, DensityMatrix) and isinstance(self.right, DensityMatrix):
            return DensityMatrix(algebra, np.kron(self.left.rho, self.right.rho))
        if isinstance(self.left, PhaseEnsemble) and isinstance(self.right, PhaseEnsemble):
            points, weights = [], []
            for (x, wx), (y, wy) in itertools.product(
                zip(self.left.points, self.left.weights), zip(self.right.points, self.right.weights)
            ):
                points.append(np.concatenate([x, y]))
                weights.append(wx * wy)
            return PhaseEnsemble(algebra, points, weights)
        raise AlgebraMismatch("product states need two density matrices or two phase ensembles")


StateFunctional = Union[DensityMatrix, PhaseEnsemble, ProductState]


def expectation(state: StateFunctional, a: AlgebraElement) -> complex:
    """φ(A): Tr(ρA), Σ pᵢ A(ξᵢ), or the product of factor expectations."""
    if a.algebra != state.algebra:
        raise AlgebraMismatch(
            f"state on {state.algebra.label}, observable in {a.algebra.label}",
            {"state": state.algebra.label, "observable": a.algebra.label},
        )
    return state.expectation(a)


# ---------------------------------------------------------------------------
# State checks
# ---------------------------------------------------------------------------

@dataclass
class StateReport:
    is_state: bool
    reasons: List[str] = field(default_factory=list)
    diagnostics: Dict[str, float] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.is_state

    def to_dict(self) -> dict:
        return {"is_state": self.is_state, "reasons": self.reasons, "diagnostics": self.diagnostics}


def is_state(state: StateFunctional, tolerance: Optional[float] = None, seed: int = 0, samples: int = 10) -> StateReport:
    tol = state.algebra.tolerance if tolerance is None else tolerance
    if isinstance(state, ProductState):
        left, right = is_state(state.left, tolerance, seed, samples), is_state(state.right, tolerance, seed, samples)
        reasons = [f"left: {r}" for r in left.reasons] + [f"right: {r}" for r in right.reasons]
        diagnostics = {**{f"left_{k}": v for k, v in left.diagnostics.items()},
                       **{f"right_{k}": v for k, v in right.diagnostics.items()}}
        return StateReport(left.is_state and right.is_state, reasons, diagnostics)
    reasons: List[str] = []
    diagnostics: Dict[str, float] = {}
    if isinstance(state, DensityMatrix):
        rho = state.rho
        herm = float(np.linalg.norm(rho - rho.conj().T))
        herm_part = (rho + rho.conj().T) / 2
        min_eig = float(scipy.linalg.eigh(herm_part, eigvals_only=True)[0])
        trace = complex(np.trace(rho))
        diagnostics.update(hermitian_defect=herm, min_eigenvalue=min_eig, trace_defect=abs(trace - 1))
        if herm > tol:
            reasons.append("not Hermitian")
        if min_eig < -tol:
            reasons.append(f"negative eigenvalue {min_eig:.3g}")
        if abs(trace - 1) > tol:
            reasons.append(f"trace {trace.real:.6g} is not 1")
    else:
        w = state.weights
        diagnostics.update(min_weight=float(w.min()), weight_defect=abs(float(w.sum()) - 1))
        if w.min() < -tol:
            reasons.append("negative weight")
        if abs(w.sum() - 1) > tol:
            reasons.append(f"weights sum to {w.sum():.6g}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        a = random_element(state.algebra, rng, 2)
        worst = min(worst, expectation(state, a.star() * a).real)
    diagnostics["min_positivity"] = worst
    if worst < -tol * 10 and not reasons:
        reasons.append("phi(a*a) < 0 for a sampled a")
    return StateReport(not reasons, reasons, diagnostics)


def is_pure(state: StateFunctional, tolerance: Optional[float] = None) -> bool:
    """Rank-one density matrix or a single phase point."""
    tol = state.algebra.tolerance if tolerance is None else tolerance
    if isinstance(state, ProductState):
        return is_pure(state.left, tol) and is_pure(state.right, tol)
    if isinstance(state, DensityMatrix):
        purity = float(np.real(np.trace(state.rho @ state.rho)))
        return abs(purity - 1.0) <= max(tol, 1e-9)
    support = state.points[state.weights > tol]
    return len(support) > 0 and bool(np.all(np.abs(support - support[0]) <= tol))


def mix(states: Sequence[StateFunctional], weights: Sequence[float]) -> StateFunctional:
    """Σ wᵢ φᵢ with wᵢ ≥ 0, Σ wᵢ = 1."""
    if len(states) != len(weights) or not states:
        raise ValueError("mix needs one weight per state")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
        raise ValueError("mixing weights must be non-negative and sum to 1")
    joint = [s.joint() if isinstance(s, ProductState) else s for s in states]
    algebra = joint[0].algebra
    if any(s.algebra != algebra for s in joint):
        raise AlgebraMismatch("cannot mix states on different algebras")
    if all(isinstance(s, DensityMatrix) for s in joint):
        return DensityMatrix(algebra, sum(wi * s.rho for wi, s in zip(w, joint)))
    if all(isinstance(s, PhaseEnsemble) for s in joint):
        points = np.vstack([s.points for s in joint])
        mixed = np.concatenate([wi * s.weights for wi, s in zip(w, joint)])
        return PhaseEnsemble(algebra, points, mixed)
    raise AlgebraMismatch("cannot mix density matrices with phase ensembles")


# ---------------------------------------------------------------------------
# Transport under canonical transformations
# ---------------------------------------------------------------------------

def transport_state(morphism: AlgebraMorphism, state: StateFunctional) -> StateFunctional:
    """The dual map: transport_state(Φ, φ)(A) = φ(Φ(A))."""
    if not morphism.is_endomorphism:
        raise NotIsomorphism(f"state transport needs an endomorphism, got {morphism.source.label} -> {morphism.target.label}")
    if isinstance(state, ProductState):
        state = state.joint()
    if morphism.source != state.algebra:
        raise AlgebraMismatch(f"morphism on {morphism.source.label}, state on {state.algebra.label}")
    if isinstance(morphism, IdentityMorphism):
        return state
    if isinstance(morphism, ComposedMorphism):
        # φ∘outer∘inner
        return transport_state(morphism.inner, transport_state(morphism.outer, state))
    if isinstance(morphism, UnitaryConjugation) and isinstance(state, DensityMatrix):
        u = morphism.u
        return DensityMatrix(state.algebra, u.conj().T @ state.rho @ u)
    if isinstance(morphism, PolynomialSubstitution) and isinstance(state, PhaseEnsemble):
        points = state.points @ morphism.matrix.T + morphism.shift
        return state.with_points(points)
    raise NotIsomorphism(f"no state transport for {type(morphism).__name__} on {type(state).__name__}")


def state_variation(structure: SymplecticStructure, generator: AlgebraElement, state: StateFunctional, a: AlgebraElement, epsilon: float) -> complex:
    """(δφ)(A) = ε·φ({G, A})."""
    return epsilon * expectation(state, poisson_bracket(structure, generator, a))


# ---------------------------------------------------------------------------
# Compatible completeness
# ---------------------------------------------------------------------------

def random_pure_state(algebra: AlgebraDescriptor, rng: np.random.Generator) -> StateFunctional:
    if algebra.is_matrix or algebra.is_matrix_product:
        dim = algebra.flat_dim
        return DensityMatrix.pure(algebra, rng.normal(size=dim) + 1j * rng.normal(size=dim))
    if is_phase_space(algebra):
        return PhaseEnsemble.point(algebra, rng.normal(size=phase_dimension(algebra)) * 2)
    raise AlgebraMismatch(f"no pure states sampled on {algebra.label}")


def _same_state(phi: StateFunctional, psi: StateFunctional, tol: float) -> bool:
    if isinstance(phi, DensityMatrix):
        return float(np.linalg.norm(phi.rho - psi.rho)) <= tol
    return bool(np.all(np.abs(phi.points[0] - psi.points[0]) <= tol))


@dataclass
class CCReport:
    observable_pairs: int = 0
    observables_separated: int = 0
    state_pairs: int = 0
    states_separated: int = 0
    unseparated: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.unseparated

    def to_dict(self) -> dict:
        return {
            "observable_pairs": self.observable_pairs,
            "observables_separated": self.observables_separated,
            "state_pairs": self.state_pairs,
            "states_separated": self.states_separated,
            "complete": self.complete,
            "unseparated": self.unseparated,
        }


def _separating_state(algebra, a, b, rng, tol, tries) -> Optional[Tuple[StateFunctional, float]]:
    diff = a - b
    if algebra.is_matrix or algebra.is_matrix_product:
        vals, vecs = scipy.linalg.eigh((diff.flatten() + diff.flatten().conj().T) / 2)
        k = int(np.argmax(np.abs(vals)))
        candidate = DensityMatrix.pure(algebra, vecs[:, k])
        gap = abs(expectation(candidate, diff))
        if gap > tol:
            return candidate, gap
    for _ in range(tries):
        candidate = random_pure_state(algebra, rng)
        gap = abs(expectation(candidate, diff))
        if gap > tol:
            return candidate, gap
    return None


def _separating_observable(algebra, phi, psi, tol) -> Optional[Tuple[AlgebraElement, float]]:
    if isinstance(psi, DensityMatrix):
        # projectors onto an orthonormal basis containing ψ's vector
        vals, vecs = scipy.linalg.eigh(psi.rho)
        for k in np.argsort(vals)[::-1]:
            proj = np.outer(vecs[:, k], vecs[:, k].conj())
            obs = from_flat(algebra, proj)
            gap = abs(expectation(phi, obs) - expectation(psi, obs))
            if gap > tol:
                return obs, gap
        return None
    for index in range(phase_dimension(algebra)):
        obs = phase_coordinate(algebra, index)
        gap = abs(expectation(phi, obs) - expectation(psi, obs))
        if gap > tol:
            return obs, gap
    return None


def phase_coordinate(algebra: AlgebraDescriptor, index: int) -> AlgebraElement:
    if algebra.is_polynomial:
        return coordinate(algebra, index)
    from ..algebra.elements import embed_left, embed_right

    k = algebra.left.nvars
    if index < k:
        return embed_left(coordinate(algebra.left, index), algebra)
    return embed_right(coordinate(algebra.right, index - k), algebra)


def cc_check(
    algebra: AlgebraDescriptor,
    observables: Sequence[AlgebraElement],
    pure_states: Sequence[StateFunctional],
    tolerance: Optional[float] = None,
    seed: int = 0,
    tries: int = 20,
) -> CCReport:
    """Observables separate pure states and pure states separate observables.

    Equal observables (or equal states) are skipped.  Unseparated pairs are
    findings, reported by index.
    """
    tol = algebra.tolerance if tolerance is None else tolerance
    rng = np.random.default_rng(seed)
    report = CCReport()
    for i, j in itertools.combinations(range(len(observables)), 2):
        a, b = observables[i], observables[j]
        if a.is_close(b, tol):
            continue
        report.observable_pairs += 1
        if _separating_state(algebra, a, b, rng, tol, tries) is not None:
            report.observables_separated += 1
        else:
            report.unseparated.append({"kind": "observables", "pair": [i, j]})
    for i, j in itertools.combinations(range(len(pure_states)), 2):
        phi, psi = pure_states[i], pure_states[j]
        if _same_state(phi, psi, tol):
            continue
        report.state_pairs += 1
        if _separating_observable(algebra, phi, psi, tol) is not None:
            report.states_separated += 1
        else:
            report.unseparated.append({"kind": "states", "pair": [i, j]})
    return report


def unit_observables(algebra: AlgebraDescriptor) -> List[AlgebraElement]:
    """Hermitian combinations of the unit basis, a spanning observable set."""
    out = []
    for e in unit_basis(algebra, 2):
        out.append(e + e.star())
        out.append((e - e.star()).scale(1j))
    return [o for o in out if not o.is_zero()]
