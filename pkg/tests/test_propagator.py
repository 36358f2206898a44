"""Dense propagation: matrix exponentials, the stepped integrator, norms,
reduced states."""

import numpy as np
import pytest

from fml import (
    ConvergenceError,
    evaluate,
    evolve,
    exact_floquet,
    expm_hermitian,
    heisenberg_ring,
    ordered_exp,
    partial_trace,
    spectral_norm,
    to_dense,
    trace_norm,
)
from fml.instances import random_chain_system

from conftest import SIGMA


# -------------------------------------------------------------- expm_hermitian

def test_expm_of_zero_is_identity():
    u = expm_hermitian(np.zeros((4, 4)))
    assert np.max(np.abs(u - np.eye(4))) < 1e-14


def test_expm_pauli_z_at_pi():
    u = expm_hermitian(SIGMA["Z"], np.pi)
    assert np.max(np.abs(u + np.eye(2))) < 1e-12


def test_expm_forward_backward_cancel():
    rng = np.random.default_rng(10)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = a + a.conj().T
    u = expm_hermitian(h, 0.7) @ expm_hermitian(h, -0.7)
    assert np.max(np.abs(u - np.eye(8))) < 1e-12


def test_expm_rejects_non_hermitian():
    with pytest.raises(ValueError):
        expm_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


# ----------------------------------------------------------------------- norms

def test_spectral_norm_values():
    assert spectral_norm(np.diag([3.0, -1.0])) == pytest.approx(3.0)
    assert spectral_norm(np.zeros((5, 5))) == 0.0
    assert spectral_norm(expm_hermitian(SIGMA["X"], 0.33)) == pytest.approx(1.0)


def test_trace_norm_values():
    psi = np.array([1.0, 1.0j]) / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    assert trace_norm(rho) == pytest.approx(1.0)
    assert trace_norm(np.diag([3.0, -1.0])) == pytest.approx(4.0)
    assert trace_norm(rho - rho) == 0.0


def test_norm_sandwich():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    s, t = spectral_norm(a), trace_norm(a)
    assert s <= t + 1e-12
    assert t <= 6 * s + 1e-12


# ------------------------------------------------------------------ ordered_exp

def test_integrator_fourth_order_step_scaling():
    # halving the step should cut the error by ~2^4; the Richardson ratio
    # e(4 steps)/e(8 steps) must sit in 16 +- 30%
    rng = np.random.default_rng(12)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    b = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    ad, bd = a + a.conj().T, b + b.conj().T

    def h(t):
        return ad + t * bd

    ref = ordered_exp(h, 0.0, 1.0, 4096)
    e_coarse = spectral_norm(ordered_exp(h, 0.0, 1.0, 16) - ref)
    e_fine = spectral_norm(ordered_exp(h, 0.0, 1.0, 32) - ref)
    assert 16 * 0.7 < e_coarse / e_fine < 16 * 1.3, e_coarse / e_fine


def test_integrator_is_unitary_even_when_coarse():
    def h(t):
        return SIGMA["X"] + 3.0 * t * SIGMA["Z"]

    u = ordered_exp(h, 0.0, 2.0, 3)
    assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-13


def test_integrator_rejects_bad_windows():
    h = lambda t: SIGMA["Z"]
    with pytest.raises(ValueError):
        ordered_exp(h, 0.0, 1.0, 0)
    with pytest.raises(ValueError):
        ordered_exp(h, 1.0, 1.0, 4)


def test_constant_hamiltonian_one_step_is_exact():
    u = ordered_exp(lambda t: SIGMA["Y"], 0.0, 0.8, 1)
    assert np.max(np.abs(u - expm_hermitian(SIGMA["Y"], 0.8))) < 1e-13


# ----------------------------------------------------------------- exact_floquet

def test_undriven_period_propagator_is_plain_exponential():
    rng = np.random.default_rng(13)
    system = random_chain_system(rng, 5, 0.3, drive=0.0)
    res = exact_floquet(system, tol=1e-12)
    direct = expm_hermitian(to_dense(system.static, 5), system.period)
    assert spectral_norm(res.matrix - direct) < 1e-11


def test_period_propagator_unitarity_tracks_tolerance(ring6_floquet):
    u = ring6_floquet.matrix
    dim = u.shape[0]
    defect = np.max(np.abs(u.conj().T @ u - np.eye(dim)))
    assert defect < 10 * ring6_floquet.tol


def test_period_propagator_matches_brute_force_sweep(ring6, ring6_floquet):
    poly = ring6.dense_poly()
    brute = ordered_exp(lambda t: evaluate(poly, t), 0.0, ring6.period, 2000)
    assert spectral_norm(ring6_floquet.matrix - brute) < 5e-11


def test_block_and_plain_paths_agree(ring6, ring6_floquet):
    res_plain = exact_floquet(ring6, tol=1e-12, blocks="none")
    assert spectral_norm(res_plain.matrix - ring6_floquet.matrix) < 1e-10


def test_refinement_budget_exhaustion_raises():
    system = heisenberg_ring(4, 0.2)
    with pytest.raises(ConvergenceError):
        exact_floquet(system, tol=1e-13 * 10, initial_steps=1, max_doublings=1)


# ----------------------------------------------------------------------- evolve

def test_evolve_zero_times_is_identity():
    psi = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    u = expm_hermitian(np.kron(SIGMA["X"], SIGMA["Y"]), 0.4)
    out = evolve(psi, u, 0)
    assert np.array_equal(out, psi)


def test_evolve_preserves_norm_and_stacks_applications():
    rng = np.random.default_rng(14)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi /= np.linalg.norm(psi)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    u = expm_hermitian(a + a.conj().T, 0.3)
    out = evolve(psi, u, 7)
    assert np.linalg.norm(out) == pytest.approx(1.0)
    assert np.max(np.abs(out - np.linalg.matrix_power(u, 7) @ psi)) < 1e-12


def test_evolve_conjugates_density_matrices():
    psi = np.array([1.0, 0.0], dtype=complex)
    rho = np.outer(psi, psi.conj())
    u = expm_hermitian(SIGMA["X"], np.pi / 2)
    out = evolve(rho, u, 1)
    # a half X-rotation maps |0><0| to |1><1| up to phases
    assert out[1, 1] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        evolve(psi, u, -1)


# ----------------------------------------------------------------- partial_trace

def test_partial_trace_of_product_state_factorizes():
    rho0 = np.array([[0.75, 0.1], [0.1, 0.25]], dtype=complex)
    rho1 = np.array([[0.5, 0.2j], [-0.2j, 0.5]], dtype=complex)
    # site 0 occupies the leading kron slot (same convention as the oracle)
    rho = np.kron(rho0, rho1)
    assert np.max(np.abs(partial_trace(rho, [0]) - rho0)) < 1e-14
    assert np.max(np.abs(partial_trace(rho, [1]) - rho1)) < 1e-14


def test_partial_trace_of_bell_pair_is_maximally_mixed():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    rho = np.outer(bell, bell.conj())
    red = partial_trace(rho, [0])
    assert np.max(np.abs(red - np.eye(2) / 2)) < 1e-14


def test_partial_trace_keep_all_is_identity_map():
    rng = np.random.default_rng(15)
    m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    rho = m @ m.conj().T
    rho /= np.trace(rho)
    assert np.max(np.abs(partial_trace(rho, [0, 1, 2]) - rho)) < 1e-14


def test_partial_trace_validation_and_errors():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), [0, 0])
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), [5])
    with pytest.raises(ValueError):
        partial_trace(np.eye(3), [0])
    with pytest.raises(ValueError):
        partial_trace(2.0 * np.eye(4) / 4.0, [0], validate=True)
