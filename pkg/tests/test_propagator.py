"""Propagator checks against an independent adaptive ODE integration.

The library builds its unitaries from midpoint slice products; every
quantitative claim here is verified against `oracles.ode_unitary`, which knows
nothing about slicing.
"""

import numpy as np
import pytest

import ottospin as o
from ottospin.propagator import ConvergenceError
import oracles

DEFAULT = o.DriveProtocol(2.0, 3.6, 100.0)
SWEEP_TAU_GRID = (100.0, 200.0, 235.0, 260.0, 300.0, 320.0, 420.0, 500.0, 600.0, 700.0)


def _swap_prob(tau_us):
    p = o.DriveProtocol(2.0, 3.6, tau_us)
    u = o.evolve_unitary(p)
    h_i, h_f = o.endpoint_hamiltonians(p)
    return o.transition_probability(u, h_i, h_f)


def test_unitarity_defect_below_contract():
    u = o.evolve_unitary(DEFAULT).matrix
    assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-10


def test_compression_unitary_is_adjoint_of_expansion():
    u = o.evolve_unitary(DEFAULT).matrix
    v = o.evolve_unitary(
        o.DriveProtocol(2.0, 3.6, 100.0, o.Phase.COMPRESSION)
    ).matrix
    assert np.max(np.abs(v - u.conj().T)) < 1e-8


def test_expansion_then_compression_composes_to_identity():
    u = o.evolve_unitary(DEFAULT).matrix
    v = o.evolve_unitary(
        o.DriveProtocol(2.0, 3.6, 100.0, o.Phase.COMPRESSION)
    ).matrix
    assert np.max(np.abs(v @ u - np.eye(2))) < 1e-8


def test_matches_independent_ode_integration():
    for tau in (100.0, 300.0, 700.0):
        u = o.evolve_unitary(o.DriveProtocol(2.0, 3.6, tau)).matrix
        ref = oracles.ode_unitary(2.0, 3.6, tau)
        assert np.max(np.abs(u - ref)) < 1e-7


def test_compression_matches_independent_ode_integration():
    v = o.evolve_unitary(o.DriveProtocol(2.0, 3.6, 100.0, o.Phase.COMPRESSION)).matrix
    ref = oracles.ode_unitary(2.0, 3.6, 100.0, compression=True)
    assert np.max(np.abs(v - ref)) < 1e-7


def test_single_slice_is_exact_midpoint_exponential():
    # With one slice the product *is* the axis-angle exponential of the frozen
    # midpoint Hamiltonian -- the sense in which slicing is exact for a
    # time-independent generator.
    from scipy.linalg import expm

    tau = 80.0
    p = o.DriveProtocol(2.0, 3.6, tau)
    u = o.evolve_unitary(p, n_steps=1, check_convergence=False).matrix
    h_mid = o.drive_hamiltonian(tau / 2, p)
    ref = expm(-1j * h_mid * tau / oracles.HBAR_PEV_US)
    assert np.max(np.abs(u - ref)) < 1e-13


def test_time_ordering_error_is_second_order_in_slice_width():
    ref = oracles.ode_unitary(2.0, 3.6, 100.0)
    errs = []
    for n in (50, 100, 200, 400):
        u = o.evolve_unitary(DEFAULT, n_steps=n, check_convergence=False).matrix
        errs.append(np.max(np.abs(u - ref)))
    for coarse, fine in zip(errs, errs[1:]):
        assert coarse / fine == pytest.approx(4.0, abs=0.05)


def test_kernel_matches_plain_loop_reference_product():
    # Guards the multiplication *order* of the optimized kernels.
    for n in (1, 2, 7, 17, 64):
        for phase in (o.Phase.EXPANSION, o.Phase.COMPRESSION):
            p = o.DriveProtocol(2.0, 3.6, 50.0, phase)
            u = o.evolve_unitary(p, n_steps=n, check_convergence=False).matrix
            ref = oracles.sequential_slice_product(
                2.0, 3.6, 50.0, n, phase is o.Phase.COMPRESSION
            )
            assert np.max(np.abs(u - ref)) < 1e-14


def test_convergence_escalation_reports_the_finer_slicing():
    um = o.evolve_unitary(DEFAULT)
    assert um.n_steps == 2 * o.DEFAULT_N_STEPS
    # the slow ramp needs one extra doubling
    um_slow = o.evolve_unitary(o.DriveProtocol(2.0, 3.6, 700.0))
    assert um_slow.n_steps == 4 * o.DEFAULT_N_STEPS


def test_convergence_failure_raises_after_bounded_doublings():
    with pytest.raises(ConvergenceError):
        o.evolve_unitary(o.DriveProtocol(2.0, 3.6, 700.0), n_steps=1)


def test_evolve_rejects_bad_step_counts():
    with pytest.raises(ValueError):
        o.evolve_unitary(DEFAULT, n_steps=0)


def test_unitary_map_rejects_non_unitary_matrices():
    with pytest.raises(ValueError):
        o.UnitaryMap(np.array([[1.0, 0.0], [0.0, 0.5]], complex), DEFAULT, 1)


def test_transition_probability_default_ramp():
    ref = oracles.TRANSITION_PROB_CONVERGED
    assert _swap_prob(100.0) == pytest.approx(ref[100.0], abs=1e-8)
    assert _swap_prob(300.0) == pytest.approx(ref[300.0], abs=1e-8)
    assert _swap_prob(700.0) == pytest.approx(ref[700.0], abs=1e-8)


def test_transition_probability_matches_ode_oracle():
    for tau in (100.0, 300.0):
        assert _swap_prob(tau) == pytest.approx(
            oracles.ode_transition_probability(2.0, 3.6, tau), abs=1e-7
        )


def test_transition_probability_sudden_limit_is_one_half():
    # For an instantaneous quench the overlap of x- and y-axis eigenstates
    # fixes the swap probability at exactly 1/2.
    assert _swap_prob(0.01) == pytest.approx(0.5, abs=1e-3)


def test_transition_probability_band_values():
    assert 0.32 <= _swap_prob(100.0) <= 0.44
    assert _swap_prob(700.0) <= 0.06


def test_transition_probability_not_monotone_but_decreasing_overall():
    values = [_swap_prob(tau) for tau in SWEEP_TAU_GRID]
    diffs = np.diff(values)
    assert np.any(diffs > 0) and np.any(diffs < 0)  # genuinely oscillatory
    assert values[-1] < values[0]


def test_transition_probability_identity_evolution_is_zero():
    h = o.drive_hamiltonian(0.0, DEFAULT)
    ident = o.UnitaryMap(np.eye(2, dtype=complex), DEFAULT, 1)
    assert o.transition_probability(ident, h, h) == pytest.approx(0.0, abs=1e-15)


def test_transition_probability_rejects_degenerate_hamiltonians():
    u = o.evolve_unitary(DEFAULT)
    with pytest.raises(ValueError, match="degenerate Hamiltonian"):
        o.transition_probability(u, np.zeros((2, 2)), o.drive_hamiltonian(0.0, DEFAULT))


def test_transition_probability_invariant_under_global_frame_rotation():
    rng = np.random.default_rng(11)
    p = DEFAULT
    u = o.evolve_unitary(p)
    h_i, h_f = o.endpoint_hamiltonians(p)
    base = o.transition_probability(u, h_i, h_f)
    for _ in range(5):
        r = oracles.haar_unitary(rng)
        rotated = o.UnitaryMap(r @ u.matrix @ r.conj().T, p, u.n_steps)
        rotated_prob = o.transition_probability(
            rotated, r @ h_i @ r.conj().T, r @ h_f @ r.conj().T
        )
        assert rotated_prob == pytest.approx(base, abs=1e-12)


def test_propagate_state_preserves_trace_purity_and_spectrum():
    rho = np.array([[0.7, 0.2 + 0.1j], [0.2 - 0.1j, 0.3]])
    u = o.evolve_unitary(DEFAULT)
    out = o.propagate_state(rho, u)
    assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
    assert np.trace(out @ out).real == pytest.approx(np.trace(rho @ rho).real, abs=1e-12)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(out), np.linalg.eigvalsh(rho), atol=1e-12
    )


def test_propagate_state_fixed_points():
    u = o.evolve_unitary(DEFAULT)
    np.testing.assert_allclose(o.propagate_state(np.eye(2) / 2, u), np.eye(2) / 2, atol=1e-12)
    rho = np.array([[0.6, 0.1], [0.1, 0.4]], complex)
    ident = o.UnitaryMap(np.eye(2, dtype=complex), DEFAULT, 1)
    np.testing.assert_allclose(o.propagate_state(rho, ident), rho, atol=1e-15)
