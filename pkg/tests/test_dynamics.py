from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg

from supmech.algebra.elements import AlgebraElement, p, q, tensor_element
from supmech.algebra.sampling import random_element
from supmech.dynamics.coupled import coupled_system
from supmech.dynamics.evolution import (
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
from supmech.dynamics.states import (
    DensityMatrix,
    PhaseEnsemble,
    ProductState,
    cc_check,
    expectation,
    is_pure,
    is_state,
    mix,
    random_pure_state,
    state_variation,
    transport_state,
    unit_observables,
)
from supmech.errors import ForbiddenCoupling, StepTooLarge
from supmech.symplectic.morphisms import UnitaryConjugation, rotation
from supmech.symplectic.structures import HamiltonianSystem

PLUS = [1.0, 1.0]


@pytest.fixture
def precession(quantum2, sigmas):
    return HamiltonianSystem(quantum2, sigmas[2].scale(0.5))


@pytest.fixture
def oscillator(classical1, poly1):
    return HamiltonianSystem(classical1, (q(poly1) * q(poly1) + p(poly1) * p(poly1)).scale(0.5))


def test_spin_precession_heisenberg(precession, sigmas) -> None:
    sx, sy, _ = sigmas
    t = 1.0
    traj = evolve_observable(precession, sx, EvolutionConfig(t_end=t, dt=1e-3))
    expected = sx.scale(np.cos(t)) - sy.scale(np.sin(t))
    assert traj.final.distance(expected) < 1e-9
    assert len(traj) == 1001


def test_spin_precession_schroedinger(precession, sigmas, m2) -> None:
    cfg = EvolutionConfig(t_end=2.0, dt=1e-3, record_every=10)
    traj = evolve_state(precession, DensityMatrix.pure(m2, PLUS), cfg)
    assert np.allclose(traj.expectations(sigmas[0]).real, np.cos(traj.times), atol=1e-9)
    traces = np.array([np.trace(s.rho) for s in traj.values])
    assert drift_per_unit_time(traces, traj.times) < 1e-12


def test_exact_and_rk4_agree(precession, sigmas) -> None:
    cfg = EvolutionConfig(t_end=1.0, dt=1e-2)
    rk = evolve_observable(precession, sigmas[0], cfg)
    ex = evolve_observable(precession, sigmas[0], EvolutionConfig(t_end=1.0, dt=1e-2, method=EXACT))
    assert rk.final.distance(ex.final) < 1e-8


def test_picture_duality(m3, rng) -> None:
    from supmech.symplectic.structures import quantum_form

    system = HamiltonianSystem(quantum_form(m3, 1.0), random_element(m3, rng, hermitian=True))
    state = random_pure_state(m3, rng)
    a = random_element(m3, rng, hermitian=True)
    assert picture_duality_residual(system, state, a, EvolutionConfig(t_end=1.0, dt=1e-2)) < 1e-8


def test_oscillator_flow(oscillator, poly1) -> None:
    cfg = EvolutionConfig(t_end=2.0, dt=1e-3)
    traj = evolve_observable(oscillator, q(poly1), cfg, point=[1.0, 0.0])
    assert np.allclose(traj.expectations().real, np.cos(traj.times), atol=1e-9)
    energy = evolve_state(oscillator, PhaseEnsemble.point(poly1, [1.0, 0.0]), cfg).expectations(oscillator.hamiltonian)
    assert np.max(np.abs(energy - 0.5)) < 1e-9


def test_phase_space_observable_needs_a_point(oscillator, poly1) -> None:
    with pytest.raises(ValueError):
        evolve_observable(oscillator, q(poly1))


def test_phase_picture_duality(oscillator, poly1) -> None:
    ensemble = PhaseEnsemble(poly1, [[1.0, 0.0], [0.0, 2.0], [0.5, -0.5]], [0.2, 0.3, 0.5])
    cfg = EvolutionConfig(t_end=1.0, dt=1e-2)
    assert picture_duality_residual(oscillator, ensemble, p(poly1), cfg) < 1e-9


def test_rk4_order(quantum2, sigmas) -> None:
    system = HamiltonianSystem(quantum2, sigmas[2].scale(3.0))
    report = convergence_study(system, sigmas[0])
    assert abs(report.order - 4.0) < 0.5
    assert report.to_dict()["dts"] == [1e-2, 5e-3, 2.5e-3]


def test_large_step_is_refused(quantum2, sigmas) -> None:
    system = HamiltonianSystem(quantum2, sigmas[2].scale(50.0))
    with pytest.raises(StepTooLarge) as exc:
        evolve_observable(system, sigmas[0], EvolutionConfig(t_end=1.0, dt=0.1))
    assert exc.value.details["dt"] == pytest.approx(0.1)


def test_conservation_and_stationarity(precession, sigmas, m2) -> None:
    sx, _, sz = sigmas
    assert is_conserved(precession, precession.hamiltonian)
    assert is_conserved(precession, sz)
    assert not is_conserved(precession, sx)
    assert is_stationary(precession, DensityMatrix.pure(m2, [1.0, 0.0]))
    assert not is_stationary(precession, DensityMatrix.pure(m2, PLUS))


def test_coupled_spins_match_matrix_exponential(quantum2, sigmas) -> None:
    sx, _, sz = sigmas
    left = HamiltonianSystem(quantum2, sz.scale(0.5))
    right = HamiltonianSystem(quantum2, sx.scale(0.3))
    system = coupled_system(left, right, [(sz, sz.scale(0.1))])
    assert system.parameter == pytest.approx(-1j, abs=1e-8)
    a0 = system.embed_left(sx)
    t = 1.5
    traj = evolve_observable(system, a0, EvolutionConfig(t_end=t, dt=1e-3))
    u = scipy.linalg.expm(-1j * system.hamiltonian.flatten() * t)
    expected = u.conj().T @ a0.flatten() @ u
    assert np.allclose(traj.final.flatten(), expected, atol=1e-9)


def test_uncoupled_product_state_factorizes(quantum2, sigmas, m2) -> None:
    sx, _, sz = sigmas
    left = HamiltonianSystem(quantum2, sz.scale(0.5))
    right = HamiltonianSystem(quantum2, sx.scale(0.3))
    system = coupled_system(left, right)
    state = ProductState(DensityMatrix.pure(m2, PLUS), DensityMatrix.pure(m2, [1.0, 0.0]))
    cfg = EvolutionConfig(t_end=1.0, dt=1e-3, record_every=100)
    joint = evolve_state(system, state, cfg).expectations(tensor_element(sx, sz))
    lone_left = evolve_state(left, state.left, cfg).expectations(sx)
    lone_right = evolve_state(right, state.right, cfg).expectations(sz)
    assert np.allclose(joint, lone_left * lone_right, atol=1e-9)


def test_mixed_coupling_is_forbidden(oscillator, precession) -> None:
    with pytest.raises(ForbiddenCoupling) as exc:
        coupled_system(oscillator, precession)
    assert exc.value.to_dict()["error"] == "ForbiddenCoupling"
    assert exc.value.details["verdict"] == "Inconsistent"


def test_state_checks(m2, poly1) -> None:
    assert is_state(DensityMatrix.pure(m2, PLUS))
    report = is_state(DensityMatrix(m2, np.diag([1.5, -0.5])))
    assert not report.is_state
    assert any("negative eigenvalue" in r for r in report.reasons)
    assert not is_state(DensityMatrix(m2, np.eye(2)))
    assert not is_state(PhaseEnsemble(poly1, [[0.0, 0.0], [1.0, 1.0]], [1.2, -0.2]))
    assert is_pure(DensityMatrix.pure(m2, PLUS))
    mixed = mix([DensityMatrix.pure(m2, [1.0, 0.0]), DensityMatrix.pure(m2, [0.0, 1.0])], [0.5, 0.5])
    assert not is_pure(mixed)
    assert is_state(mixed)


def test_product_state_expectation(m2, sigmas) -> None:
    sx, _, sz = sigmas
    state = ProductState(DensityMatrix.pure(m2, PLUS), DensityMatrix.pure(m2, [1.0, 0.0]))
    assert expectation(state, tensor_element(sx, sz)) == pytest.approx(1.0)
    assert expectation(state.joint(), tensor_element(sx, sz)) == pytest.approx(1.0)


def test_state_transport_is_dual(m2, poly1, sigmas, rng) -> None:
    phi = UnitaryConjugation.exponential(sigmas[1], 0.4)
    rho = random_pure_state(m2, rng)
    a = random_element(m2, rng, hermitian=True)
    assert expectation(transport_state(phi, rho), a) == pytest.approx(expectation(rho, phi(a)))

    rot = rotation(poly1)
    ensemble = PhaseEnsemble(poly1, [[1.0, 0.0], [0.3, 0.7]])
    for obs in (q(poly1), p(poly1) * p(poly1) + q(poly1)):
        assert expectation(transport_state(rot, ensemble), obs) == pytest.approx(expectation(ensemble, rot(obs)))


def test_infinitesimal_state_variation(quantum2, sigmas, m2) -> None:
    sx, _, sz = sigmas
    y_plus = DensityMatrix.pure(m2, [1.0, 1j])
    # {σz, σx} = −2σy and ⟨σy⟩ = 1 on this state
    assert state_variation(quantum2, sz, y_plus, sx, 0.01) == pytest.approx(-0.02)


def test_compatible_completeness(m2, poly1, rng) -> None:
    for algebra in (m2, poly1):
        observables = unit_observables(algebra) + [random_element(algebra, rng, hermitian=True) for _ in range(5)]
        states = [random_pure_state(algebra, rng) for _ in range(6)]
        report = cc_check(algebra, observables, states, tolerance=1e-9)
        assert report.complete, report.to_dict()
        assert report.state_pairs == 15


def test_matrix_element_evaluation_is_refused(m2) -> None:
    with pytest.raises(TypeError):
        AlgebraElement(m2, np.eye(2)).evaluate([0.0, 0.0])
