"""Time evolution, state and compatible-completeness cases."""

from __future__ import annotations

import math
from typing import List, Optional

import numpy as np
import scipy.linalg

from ..algebra.descriptors import AlgebraDescriptor, polynomial_algebra, tensor_algebra
from ..algebra.elements import AlgebraElement, p, q, scalar, tensor_element, unit
from ..algebra.matrices import pauli
from ..algebra.sampling import random_element
from ..config import SupmechConfig
from ..dynamics.coupled import coupled_system
from ..dynamics.evolution import (
    EXACT,
    EvolutionConfig,
    convergence_study,
    drift_per_unit_time,
    evolve_observable,
    evolve_state,
    is_conserved,
    is_stationary,
    picture_duality_residual,
)
from ..dynamics.states import (
    DensityMatrix,
    PhaseEnsemble,
    cc_check,
    expectation,
    random_pure_state,
    state_variation,
    transport_state,
    unit_observables,
)
from ..errors import AlgebraMismatch, ForbiddenCoupling
from ..models import CaseResult
from ..symplectic.morphisms import UnitaryConjugation, rotation
from ..symplectic.structures import HamiltonianSystem, classical_form, quantum_form
from ..symplectic.transformations import hamiltonian_flow
from .base import case_rng, elements_witness

TRAJECTORY_TOLERANCE = 1e-6
DRIFT_TOLERANCE = 1e-8
ORDER_TOLERANCE = 0.5
CC_SAMPLES = 15  # 105 pairs
LONG_RUN = EvolutionConfig(t_end=10.0, dt=1e-3, record_every=10)
GRID = EvolutionConfig(t_end=1.0, dt=1e-2)  # 101-point grid


def _oscillator(algebra: AlgebraDescriptor, quartic: float = 0.0) -> AlgebraElement:
    """Σⱼ (pⱼ² + qʲ²)/2, plus quartic·q¹⁴."""
    h = scalar(algebra, 0.0)
    for j in range(1, algebra.n + 1):
        h = h + (p(algebra, j) * p(algebra, j) + q(algebra, j) * q(algebra, j)).scale(0.5)
    if quartic:
        q1 = q(algebra, 1)
        h = h + (q1 * q1 * q1 * q1).scale(quartic)
    return h


def _density_drifts(trajectory, h: AlgebraElement) -> dict:
    rhos = [s.rho for s in trajectory.values]
    times = trajectory.times
    traces = np.array([np.trace(r) for r in rhos])
    herm = max(float(np.linalg.norm(r - r.conj().T)) for r in rhos)
    min_eig = min(float(scipy.linalg.eigvalsh((r + r.conj().T) / 2)[0]) for r in rhos)
    energies = trajectory.expectations(h)
    return {
        "trace": drift_per_unit_time(traces, times),
        "hermiticity": herm / max(1.0, float(times[-1])),
        "positivity": max(0.0, -min_eig),
        "energy": drift_per_unit_time(energies, times),
    }


def _matrix_cases(algebra: AlgebraDescriptor, trials: int, seed: int, hbar: float, tol: float) -> List[CaseResult]:
    name = algebra.label
    structure = quantum_form(algebra, hbar)
    cases: List[CaseResult] = []

    rng = case_rng(seed, f"{name}/von-neumann")
    h = random_element(algebra, rng, hermitian=True)
    system = HamiltonianSystem(structure, h)
    rho0 = random_pure_state(algebra, rng)
    drifts = _density_drifts(evolve_state(system, rho0, LONG_RUN), h)
    for key, value in drifts.items():
        cases.append(CaseResult.measure(
            f"{name}/von-neumann-{key}", value, DRIFT_TOLERANCE,
            witness={"hamiltonian": elements_witness([h])}, details={"t_end": LONG_RUN.t_end, "dt": LONG_RUN.dt},
        ))

    rng = case_rng(seed, f"{name}/picture-duality")
    worst, witness = 0.0, None
    for _ in range(max(1, min(trials, 10))):
        h = random_element(algebra, rng, hermitian=True)
        a0 = random_element(algebra, rng, hermitian=True)
        residual = picture_duality_residual(HamiltonianSystem(structure, h), random_pure_state(algebra, rng), a0, GRID)
        if residual >= worst:
            worst, witness = residual, elements_witness([h, a0])
    cases.append(CaseResult.measure(f"{name}/picture-duality", worst, DRIFT_TOLERANCE, witness))

    rng = case_rng(seed, f"{name}/rk4-convergence")
    h = random_element(algebra, rng, hermitian=True)
    h = h.scale(3.0 / max(h.norm(), tol))
    a0 = random_element(algebra, rng, hermitian=True)
    study = convergence_study(HamiltonianSystem(structure, h), a0)
    cases.append(CaseResult.measure(
        f"{name}/rk4-convergence",
        abs(study.order - 4.0) if math.isfinite(study.order) else math.inf,
        ORDER_TOLERANCE,
        witness=study.to_dict(),
        details=study.to_dict(),
    ))

    rng = case_rng(seed, f"{name}/exact-vs-rk4")
    h = random_element(algebra, rng, hermitian=True)
    a0 = random_element(algebra, rng, hermitian=True)
    system = HamiltonianSystem(structure, h)
    rk = evolve_observable(system, a0, LONG_RUN)
    ex = evolve_observable(system, a0, EvolutionConfig(t_end=LONG_RUN.t_end, dt=LONG_RUN.dt, method=EXACT, record_every=LONG_RUN.record_every))
    deviation = max(x.distance(y) for x, y in zip(rk.values, ex.values))
    cases.append(CaseResult.measure(f"{name}/exact-vs-rk4", deviation, TRAJECTORY_TOLERANCE, elements_witness([h, a0])))

    central = HamiltonianSystem(structure, unit(algebra).scale(1.7))
    frozen = evolve_observable(central, a0, GRID)
    cases.append(CaseResult.measure(
        f"{name}/central-hamiltonian", max(v.distance(a0) for v in frozen.values), tol,
    ))
    cases.append(CaseResult.measure(
        f"{name}/energy-conserved", 0.0 if is_conserved(system, h) else 1.0, 0.0,
    ))

    vals, vecs = scipy.linalg.eigh(h.flatten())
    eigenstate = DensityMatrix.pure(algebra, vecs[:, 0])
    cases.append(CaseResult.measure(
        f"{name}/stationary-eigenstate", 0.0 if is_stationary(system, eigenstate, 1e-8) else 1.0, 0.0,
    ))

    rng = case_rng(seed, f"{name}/state-transport")
    worst = 0.0
    for _ in range(max(1, min(trials, 20))):
        g = random_element(algebra, rng, hermitian=True)
        phi = UnitaryConjugation.exponential(g, 0.7, hbar)
        state = random_pure_state(algebra, rng)
        a = random_element(algebra, rng)
        worst = max(worst, abs(expectation(transport_state(phi, state), a) - expectation(state, phi.apply(a))))
    cases.append(CaseResult.measure(f"{name}/state-transport", worst, tol * 10))

    rng = case_rng(seed, f"{name}/infinitesimal-variation")
    eps = 1e-4
    g = random_element(algebra, rng, hermitian=True)
    a = random_element(algebra, rng, hermitian=True)
    state = random_pure_state(algebra, rng)
    flow = hamiltonian_flow(structure, g, eps)
    finite = expectation(state, flow.apply(a)) - expectation(state, a)
    predicted = state_variation(structure, g, state, a, eps)
    cases.append(CaseResult.measure(
        f"{name}/infinitesimal-variation", abs(finite - predicted), 1e3 * eps ** 2,
        elements_witness([g, a]), {"epsilon": eps},
    ))

    cases.append(_cc_case(algebra, seed))
    if algebra.n == 2:
        cases.extend(_spin_cases(algebra, hbar))
    return cases


def _spin_cases(algebra: AlgebraDescriptor, hbar: float) -> List[CaseResult]:
    sx, sy, sz = pauli(algebra)
    structure = quantum_form(algebra, hbar)
    name = algebra.label

    precession = evolve_observable(HamiltonianSystem(structure, sz.scale(0.5 * hbar)), sx, LONG_RUN)
    deviation = max(
        a.distance(sx.scale(math.cos(t)) - sy.scale(math.sin(t)))
        for t, a in zip(precession.times, precession.values)
    )
    cases = [CaseResult.measure(f"{name}/spin-precession", deviation, TRAJECTORY_TOLERANCE)]

    left = HamiltonianSystem(structure, sz.scale(0.5 * hbar))
    right = HamiltonianSystem(structure, sx.scale(0.3 * hbar))
    g = 0.1
    coupled = coupled_system(left, right, [(sz, sz.scale(g))])
    observable = tensor_element(sx, unit(algebra), coupled.algebra)
    run = evolve_observable(coupled, observable, LONG_RUN)
    flat_h = coupled.hamiltonian.flatten()
    flat_a = observable.flatten()
    worst = 0.0
    for t, a in zip(run.times, run.values):
        u = scipy.linalg.expm(-1j * t / hbar * flat_h)
        worst = max(worst, float(np.linalg.norm(a.flatten() - u.conj().T @ flat_a @ u)))
    cases.append(CaseResult.measure(f"{name}/two-spin-coupling", worst, TRAJECTORY_TOLERANCE, details={"g": g}))

    free = coupled_system(left, right)
    b0 = sy
    joint = evolve_observable(free, tensor_element(sx, b0, free.algebra), GRID)
    first = evolve_observable(left, sx, GRID)
    second = evolve_observable(right, b0, GRID)
    worst = max(
        j.distance(tensor_element(x, y, free.algebra))
        for j, x, y in zip(joint.values, first.values, second.values)
    )
    cases.append(CaseResult.measure(f"{name}/uncoupled-factorization", worst, TRAJECTORY_TOLERANCE))

    poly = polynomial_algebra(1)
    classical = HamiltonianSystem(classical_form(poly), _oscillator(poly))
    try:
        coupled_system(classical, left)
        refused, detail = False, {}
    except ForbiddenCoupling as exc:
        refused, detail = True, exc.details
    cases.append(CaseResult.measure(
        f"{name}/mixed-coupling-refused", 0.0 if refused else 1.0, 0.0,
        witness={"algebra": tensor_algebra(poly, algebra).label}, details=detail,
    ))
    return cases


def _cc_case(algebra: AlgebraDescriptor, seed: int) -> CaseResult:
    rng = case_rng(seed, f"{algebra.label}/compatible-completeness")
    observables = unit_observables(algebra)
    observables += [random_element(algebra, rng, 2, hermitian=True) for _ in range(CC_SAMPLES)]
    states = [random_pure_state(algebra, rng) for _ in range(CC_SAMPLES)]
    report = cc_check(algebra, observables, states, seed=int(rng.integers(2**31)))
    return CaseResult.measure(
        f"{algebra.label}/compatible-completeness", float(len(report.unseparated)), 0.0,
        witness={"unseparated": report.unseparated}, details=report.to_dict(),
    )


def _polynomial_cases(algebra: AlgebraDescriptor, trials: int, seed: int, tol: float) -> List[CaseResult]:
    name = algebra.label
    structure = classical_form(algebra)
    cases: List[CaseResult] = []

    oscillator = HamiltonianSystem(structure, _oscillator(algebra))
    start = np.zeros(algebra.nvars)
    start[0] = 1.0
    run = evolve_observable(oscillator, q(algebra, 1), LONG_RUN, point=start)
    deviation = float(np.max(np.abs(np.asarray(run.values) - np.cos(run.times))))
    cases.append(CaseResult.measure(f"{name}/oscillator", deviation, TRAJECTORY_TOLERANCE))

    anharmonic = HamiltonianSystem(structure, _oscillator(algebra, quartic=0.1))
    rng = case_rng(seed, f"{name}/liouville-energy")
    points = 0.7 * rng.normal(size=(8, algebra.nvars))
    ensemble = PhaseEnsemble(algebra, points, np.full(len(points), 1.0 / len(points)))
    flow = evolve_state(anharmonic, ensemble, LONG_RUN)
    energy = flow.expectations(anharmonic.hamiltonian)
    cases.append(CaseResult.measure(f"{name}/liouville-energy", drift_per_unit_time(energy, flow.times), DRIFT_TOLERANCE))

    f = random_element(algebra, rng, 4, real=True)
    final = flow.final
    direct = sum(w * f.evaluate(x) for x, w in zip(final.points, final.weights))
    cases.append(CaseResult.measure(
        f"{name}/ensemble-consistency", abs(final.expectation(f) - direct), tol * max(1.0, abs(direct)),
    ))

    duality = picture_duality_residual(anharmonic, PhaseEnsemble(algebra, points[:3]), q(algebra, 1), GRID)
    cases.append(CaseResult.measure(f"{name}/picture-duality", duality, DRIFT_TOLERANCE))

    phi = rotation(algebra)
    rng = case_rng(seed, f"{name}/state-transport")
    worst = 0.0
    for _ in range(max(1, min(trials, 20))):
        state = random_pure_state(algebra, rng)
        a = random_element(algebra, rng, 2)
        worst = max(worst, abs(expectation(transport_state(phi, state), a) - expectation(state, phi.apply(a))))
    cases.append(CaseResult.measure(f"{name}/state-transport", worst, tol * 10))

    cases.append(CaseResult.measure(
        f"{name}/energy-conserved", 0.0 if is_conserved(oscillator, oscillator.hamiltonian) else 1.0, 0.0,
    ))
    cases.append(_cc_case(algebra, seed))
    return cases


def run_dynamics_suite(
    algebra: AlgebraDescriptor,
    trials: int,
    seed: int,
    config: Optional[SupmechConfig] = None,
) -> List[CaseResult]:
    tol = config.numerics.tolerance if config else algebra.tolerance
    hbar = config.physics.hbar if config else 1.0
    if algebra.is_matrix:
        return _matrix_cases(algebra, trials, seed, hbar, tol)
    if algebra.is_polynomial:
        return _polynomial_cases(algebra, trials, seed, tol)
    raise AlgebraMismatch(f"the dynamics suite runs on matrix or polynomial algebras, got {algebra.label}")
