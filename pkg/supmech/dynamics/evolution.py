"""Time evolution: Hamilton's equation for observables, Liouville for states.

Finite matrix backends integrate the linear flow dA/dt = {H, A} on the
flattened algebra.  The RK4 step of a linear system is the degree-4 Taylor
polynomial of exp(hL), so the propagator is built once per run.  States
follow the dual flow dρ/dt = −Y_H(ρ), which is the von Neumann equation on
a quantum structure.  Commutative phase-space backends move points along
the Hamiltonian vector field instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from ..algebra.descriptors import AlgebraDescriptor
from ..algebra.elements import AlgebraElement, from_flat
from ..algebra.sampling import unit_basis
from ..errors import AlgebraMismatch, StepTooLarge
from .states import (
    DensityMatrix,
    PhaseEnsemble,
    ProductState,
    StateFunctional,
    is_phase_space,
    phase_coordinate,
    expectation,
    is_state,
    phase_dimension,
)

RK4 = "rk4"
EXACT = "exact"
METHODS = (RK4, EXACT)

LinearMap = Callable[[AlgebraElement], AlgebraElement]


@dataclass
class EvolutionConfig:
    t_end: float = 10.0
    dt: float = 1e-3
    method: str = RK4
    error_check_every: int = 1000
    max_local_error: float = 1e-6
    record_every: int = 1

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0:
            raise ValueError(f"t_end must be non-negative, got {self.t_end}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        if self.record_every < 1 or self.error_check_every < 1:
            raise ValueError("record_every and error_check_every must be at least 1")

    @property
    def steps(self) -> int:
        return max(1, int(round(self.t_end / self.dt))) if self.t_end > 0 else 0

    @property
    def step(self) -> float:
        return self.t_end / self.steps if self.steps else self.dt

    def times(self) -> np.ndarray:
        idx = np.arange(0, self.steps + 1, self.record_every)
        if idx[-1] != self.steps:
            idx = np.append(idx, self.steps)
        return idx * self.step


@dataclass
class Trajectory:
    """Recorded times with one value per time.

    Values are AlgebraElements (observable runs), states (state runs) or
    complex numbers (observables sampled along a phase-space flow, in which
    case ``points`` holds the flow).
    """
    times: np.ndarray
    values: List[Any]
    points: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> Any:
        return self.values[-1]

    def expectations(self, other: Union[StateFunctional, AlgebraElement, None] = None) -> np.ndarray:
        """φ(A(t)) for observable runs, φ(t)(A) for state runs."""
        first = self.values[0]
        if isinstance(first, AlgebraElement):
            return np.array([expectation(other, a) for a in self.values])
        if isinstance(first, (DensityMatrix, PhaseEnsemble, ProductState)):
            return np.array([expectation(s, other) for s in self.values])
        return np.asarray(self.values, dtype=complex)


# ---------------------------------------------------------------------------
# Linear flows on finite matrix backends
# ---------------------------------------------------------------------------

def _flattenable(algebra: AlgebraDescriptor) -> bool:
    return algebra.is_matrix or algebra.is_matrix_product


def generator_matrix(algebra: AlgebraDescriptor, generator: LinearMap) -> np.ndarray:
    """Matrix of a linear map on the row-major flattening of the algebra."""
    dim = algebra.flat_dim
    columns = []
    for idx in range(dim * dim):
        e = np.zeros(dim * dim, dtype=complex)
        e[idx] = 1.0
        columns.append(generator(from_flat(algebra, e.reshape(dim, dim))).flatten().ravel())
    return np.column_stack(columns)


def rk4_propagator(matrix: np.ndarray, h: float) -> np.ndarray:
    """One RK4 step of dx/dt = Lx: Σₖ₌₀⁴ (hL)ᵏ/k!."""
    hl = h * matrix
    out = np.eye(matrix.shape[0], dtype=complex)
    term = out
    for k in range(1, 5):
        term = term @ hl / k
        out = out + term
    return out


def _march_linear(matrix: np.ndarray, x0: np.ndarray, cfg: EvolutionConfig) -> List[np.ndarray]:
    h, n = cfg.step, cfg.steps
    prop = rk4_propagator(matrix, h)
    prop2 = rk4_propagator(matrix, 2 * h)
    x = x0
    out = [x0]
    for step in range(1, n + 1):
        if (step - 1) % cfg.error_check_every == 0:
            err = float(np.linalg.norm(prop @ (prop @ x) - prop2 @ x)) / 15.0
            if err > cfg.max_local_error * max(1.0, float(np.linalg.norm(x))):
                raise StepTooLarge(
                    f"local error {err:.3g} exceeds {cfg.max_local_error:.3g} at t = {(step - 1) * h:.6g}",
                    {"dt": h, "local_error": err, "bound": cfg.max_local_error, "time": (step - 1) * h},
                )
        x = prop @ x
        if step % cfg.record_every == 0 or step == n:
            out.append(x)
    return out


def _exact_conjugators(system, cfg: EvolutionConfig):
    """V(h) = exp(−hH/b) and its inverse, for ω = b·ω_c."""
    b = system.parameter
    if b is None or not _flattenable(system.algebra):
        raise ValueError("exact conjugation needs a matrix backend and a structure of the form b·omega_c")
    flat = system.hamiltonian.flatten()
    h = cfg.step
    return scipy.linalg.expm(-h * flat / b), scipy.linalg.expm(h * flat / b)


def _march_exact(system, x0: np.ndarray, cfg: EvolutionConfig, heisenberg: bool) -> List[np.ndarray]:
    v, v_inv = _exact_conjugators(system, cfg)
    x = x0
    out = [x0]
    for step in range(1, cfg.steps + 1):
        x = v_inv @ x @ v if heisenberg else v @ x @ v_inv
        if step % cfg.record_every == 0 or step == cfg.steps:
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# Phase-space flows
# ---------------------------------------------------------------------------

def phase_field(system) -> Callable[[np.ndarray], np.ndarray]:
    """ξ ↦ dξ/dt with components {H, ξᵃ}, vectorized over rows of points."""
    algebra = system.algebra
    gen = system.generator()
    components = [gen(phase_coordinate(algebra, a)) for a in range(phase_dimension(algebra))]

    def vector_field(points: np.ndarray) -> np.ndarray:
        if algebra.is_polynomial:
            cols = [c.polynomial.evaluate_many(points) for c in components]
        else:
            cols = [np.array([c.evaluate(x) for x in points]) for c in components]
        return np.real(np.column_stack(cols))

    return vector_field


def _rk4_points(vector_field, x: np.ndarray, h: float) -> np.ndarray:
    k1 = vector_field(x)
    k2 = vector_field(x + 0.5 * h * k1)
    k3 = vector_field(x + 0.5 * h * k2)
    k4 = vector_field(x + h * k3)
    return x + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _march_points(system, points: np.ndarray, cfg: EvolutionConfig) -> List[np.ndarray]:
    if cfg.method == EXACT:
        raise ValueError("exact conjugation is only available on matrix backends")
    vector_field = phase_field(system)
    h = cfg.step
    x = np.array(points, dtype=float)
    out = [x]
    for step in range(1, cfg.steps + 1):
        if (step - 1) % cfg.error_check_every == 0:
            two = _rk4_points(vector_field, _rk4_points(vector_field, x, h), h)
            err = float(np.max(np.abs(two - _rk4_points(vector_field, x, 2 * h)))) / 15.0
            if err > cfg.max_local_error * max(1.0, float(np.max(np.abs(x)))):
                raise StepTooLarge(
                    f"local error {err:.3g} exceeds {cfg.max_local_error:.3g} at t = {(step - 1) * h:.6g}",
                    {"dt": h, "local_error": err, "bound": cfg.max_local_error, "time": (step - 1) * h},
                )
        x = _rk4_points(vector_field, x, h)
        if step % cfg.record_every == 0 or step == cfg.steps:
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def evolve_observable(
    system,
    a0: AlgebraElement,
    cfg: Optional[EvolutionConfig] = None,
    point: Optional[Sequence[float]] = None,
) -> Trajectory:
    """Integrate dA/dt = {H, A}.

    On phase-space backends the flow of ``point`` is integrated and A₀ is
    sampled along it: the values are A₀(ξ(t)) = A(t)(ξ₀).
    """
    cfg = cfg or EvolutionConfig()
    algebra = system.algebra
    if a0.algebra != algebra:
        raise AlgebraMismatch(f"observable in {a0.algebra.label}, system on {algebra.label}")
    times = cfg.times()
    if _flattenable(algebra):
        dim = algebra.flat_dim
        if cfg.method == EXACT:
            mats = _march_exact(system, a0.flatten(), cfg, heisenberg=True)
        else:
            matrix = generator_matrix(algebra, system.generator())
            mats = [v.reshape(dim, dim) for v in _march_linear(matrix, a0.flatten().ravel(), cfg)]
        return Trajectory(times, [from_flat(algebra, m) for m in mats])
    if is_phase_space(algebra):
        if point is None:
            raise ValueError("phase-space evolution of an observable needs a starting point")
        flow = _march_points(system, np.atleast_2d(np.asarray(point, dtype=float)), cfg)
        values = [PhaseEnsemble.point(algebra, x[0]).expectation(a0) for x in flow]
        return Trajectory(times, values, np.array([x[0] for x in flow]))
    raise AlgebraMismatch(f"no time evolution on {algebra.label}")


def evolve_state(system, state0: StateFunctional, cfg: Optional[EvolutionConfig] = None) -> Trajectory:
    """Integrate the Liouville flow: dρ/dt = −Y_H(ρ), or move ensemble points."""
    cfg = cfg or EvolutionConfig()
    report = is_state(state0)
    if not report.is_state:
        raise ValueError(f"initial state is not a state: {'; '.join(report.reasons)}")
    if isinstance(state0, ProductState):
        state0 = state0.joint()
    algebra = system.algebra
    if state0.algebra != algebra:
        raise AlgebraMismatch(f"state on {state0.algebra.label}, system on {algebra.label}")
    times = cfg.times()
    if isinstance(state0, DensityMatrix):
        dim = algebra.flat_dim
        if cfg.method == EXACT:
            mats = _march_exact(system, state0.rho, cfg, heisenberg=False)
        else:
            matrix = -generator_matrix(algebra, system.generator())
            mats = [v.reshape(dim, dim) for v in _march_linear(matrix, state0.rho.ravel(), cfg)]
        return Trajectory(times, [DensityMatrix(algebra, m) for m in mats])
    flow = _march_points(system, state0.points, cfg)
    return Trajectory(times, [state0.with_points(x) for x in flow], np.array(flow))


# ---------------------------------------------------------------------------
# Conservation, stationarity, duality, convergence
# ---------------------------------------------------------------------------

def is_conserved(system, a: AlgebraElement, tolerance: Optional[float] = None) -> bool:
    """{H, A} = 0."""
    tol = system.algebra.tolerance if tolerance is None else tolerance
    return system.generator()(a).norm() <= tol * max(1.0, a.norm())


def is_stationary(system, state: StateFunctional, tolerance: Optional[float] = None) -> bool:
    """φ({H, A}) = 0 on a spanning set of A."""
    tol = system.algebra.tolerance if tolerance is None else tolerance
    if isinstance(state, ProductState):
        state = state.joint()
    gen = system.generator()
    return all(abs(expectation(state, gen(e))) <= tol * max(1.0, e.norm()) for e in unit_basis(system.algebra, 2))


def picture_duality_residual(system, state: StateFunctional, a: AlgebraElement, cfg: Optional[EvolutionConfig] = None) -> float:
    """max over the grid of |⟨φ(t), A⟩ − ⟨φ, A(t)⟩|."""
    cfg = cfg or EvolutionConfig()
    schroedinger = evolve_state(system, state, cfg).expectations(a)
    if isinstance(state, ProductState):
        state = state.joint()
    if isinstance(state, PhaseEnsemble):
        heisenberg = np.zeros(len(schroedinger), dtype=complex)
        for x, w in zip(state.points, state.weights):
            heisenberg += w * evolve_observable(system, a, cfg, point=x).expectations()
    else:
        heisenberg = evolve_observable(system, a, cfg).expectations(state)
    return float(np.max(np.abs(schroedinger - heisenberg)))


def drift_per_unit_time(series: np.ndarray, times: np.ndarray) -> float:
    """max |s(t) − s(0)| divided by max(1, t_end)."""
    if len(series) == 0:
        return 0.0
    return float(np.max(np.abs(series - series[0]))) / max(1.0, float(times[-1]))


@dataclass
class ConvergenceReport:
    dts: List[float]
    errors: List[float]
    constants: List[float] = field(default_factory=list)
    order: float = math.nan

    def to_dict(self) -> dict:
        return {"dts": self.dts, "errors": self.errors, "constants": self.constants, "order": self.order}


def convergence_study(system, a0: AlgebraElement, t_end: float = 1.0, dts: Sequence[float] = (1e-2, 5e-3, 2.5e-3)) -> ConvergenceReport:
    """RK4 against exact conjugation; C = error / dt⁴ and the fitted order."""
    errors = []
    for dt in dts:
        rk = evolve_observable(system, a0, EvolutionConfig(t_end=t_end, dt=dt, method=RK4))
        ex = evolve_observable(system, a0, EvolutionConfig(t_end=t_end, dt=dt, method=EXACT))
        errors.append(max(x.distance(y) for x, y in zip(rk.values, ex.values)))
    constants = [e / dt ** 4 for e, dt in zip(errors, dts)]
    positive = [(dt, e) for dt, e in zip(dts, errors) if e > 0]
    order = math.nan
    if len(positive) >= 2:
        order = float(np.polyfit(np.log([d for d, _ in positive]), np.log([e for _, e in positive]), 1)[0])
    return ConvergenceReport(list(dts), errors, constants, order)
