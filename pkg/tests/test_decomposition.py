"""Factorizing the period propagator into per-site stage unitaries."""

import numpy as np
import pytest

from fml import (
    DrivenSystem,
    PauliOperator,
    PauliString,
    PiecewisePolyOperator,
    TimePolyOperator,
    exact_floquet,
    expm_hermitian,
    interaction_unitaries,
    lemma2_check,
    spectral_norm,
    split_driving,
    to_dense,
    truncated_unitaries,
)
from fml import heisenberg_ring
from fml.instances import random_chain_system


def chain_with_driving(n, period, terms):
    """Tiny helper: static XX chain plus a single linear-in-t driving blob."""
    bonds = [(i, i + 1) for i in range(n - 1)]
    static = PauliOperator.from_strings(
        n, [PauliString((i, i + 1), "XX", 0.5) for i in range(n - 1)]
    )
    drive = PauliOperator.from_strings(n, terms)
    zero = PauliOperator.zero(n)
    seg = TimePolyOperator([zero, drive], period, 0.0, 0)
    return DrivenSystem(n, bonds, static, PiecewisePolyOperator([seg]), period)


# --------------------------------------------------------------- split_driving

def test_split_routes_each_term_to_its_smallest_site():
    system = chain_with_driving(
        6,
        0.3,
        [
            PauliString((1,), "Z", 0.8),
            PauliString((2, 5), "XY", -0.4),
        ],
    )
    parts = split_driving(system)
    populated = {
        i for i, p in enumerate(parts)
        if any(any(pl.terms for pl in seg.coeffs) for seg in p.segments)
    }
    assert populated == {1, 2}
    # the (2,5) term must sit in the site-2 part, not the site-5 one
    part2 = parts[2].evaluate(0.3)
    assert ((2, 5), "XY") in part2.terms


def test_split_parts_sum_back_to_the_driving():
    rng = np.random.default_rng(20)
    system = random_chain_system(rng, 5, 0.4, degree=2, segments=2)
    parts = split_driving(system)
    for t in np.linspace(0.4 / 16, 0.4, 16):
        total = parts[0].evaluate(t)
        for p in parts[1:]:
            total = total + p.evaluate(t)
        diff = total - system.driving.evaluate(t)
        assert max((abs(c) for c in diff.terms.values()), default=0.0) < 1e-12


def test_split_with_static_folded_reproduces_full_hamiltonian():
    rng = np.random.default_rng(21)
    system = random_chain_system(rng, 4, 0.25)
    parts = split_driving(system, fold_static=True)
    for t in np.linspace(0.25 / 16, 0.25, 16):
        total = parts[0].evaluate(t)
        for p in parts[1:]:
            total = total + p.evaluate(t)
        diff = total - system.hamiltonian(t)
        assert max((abs(c) for c in diff.terms.values()), default=0.0) < 1e-12


# ------------------------------------------------------- interaction_unitaries

def test_undriven_system_gives_identity_stages():
    rng = np.random.default_rng(22)
    system = random_chain_system(rng, 4, 0.3, drive=0.0)
    result = interaction_unitaries(system, tol=1e-10)
    dim = 2**4
    for u in result.u_parts:
        assert spectral_norm(u - np.eye(dim)) < 1e-9
    assert result.reconstruction_error < 1e-9


def test_single_site_driving_concentrates_in_one_stage():
    system = chain_with_driving(4, 0.2, [PauliString((3,), "X", 1.0)])
    result = interaction_unitaries(system, tol=1e-10)
    dim = 2**4
    for s, u in enumerate(result.u_parts):
        defect = spectral_norm(u - np.eye(dim))
        if s == 3:
            assert defect > 1e-3
        else:
            assert defect < 1e-9


def test_product_reconstructs_the_period_propagator():
    rng = np.random.default_rng(23)
    system = random_chain_system(rng, 4, 0.3, degree=2)
    result = interaction_unitaries(system, tol=1e-9)
    assert result.reconstruction_error < 1e-9
    # rebuild the product by hand against an independent propagator
    u = expm_hermitian(to_dense(system.static, 4), system.period)
    for s in reversed(range(4)):
        u = u @ result.u_parts[s]
    u_f = exact_floquet(system, tol=1e-12).matrix
    assert spectral_norm(u - u_f) < 2e-9


def test_primed_split_needs_no_static_prefactor():
    rng = np.random.default_rng(24)
    system = random_chain_system(rng, 4, 0.3)
    result = interaction_unitaries(system, tol=1e-9, primed=True)
    u = np.eye(2**4, dtype=complex)
    for s in reversed(range(4)):
        u = u @ result.u_parts[s]
    u_f = exact_floquet(system, tol=1e-12).matrix
    assert spectral_norm(u - u_f) < 2e-9
    assert result.params["support_defect"] < 1e-8


# --------------------------------------------------------- truncated_unitaries

def test_truncated_chain_telescopes_and_reconstructs():
    system = heisenberg_ring(4, 0.02)
    n0 = 2
    u_parts, info = truncated_unitaries(system, n0, tol=1e-11)
    assert info["telescoping_residual"] < 1e-11
    assert info["static_residual"] < 1e-12
    # unrolled chain identity: exp(-i H^(n0) T) equals the static
    # exponential times the stage product
    u = expm_hermitian(info["h_ops"][4], system.period)
    for s in reversed(range(4)):
        u = u @ u_parts[s]
    target = expm_hermitian(info["h_ops"][0], system.period)
    assert spectral_norm(u - target) < 1e-9


def test_zero_average_driving_at_order_zero_freezes_every_stage():
    rng = np.random.default_rng(25)
    system = random_chain_system(rng, 4, 0.2, zero_average=True)
    u_parts, info = truncated_unitaries(system, 0, tol=1e-11)
    dim = 2**4
    for u in u_parts:
        assert spectral_norm(u - np.eye(dim)) < 1e-10
    assert info["telescoping_residual"] < 1e-13


# ---------------------------------------------------------------- lemma2_check

def test_stage_distance_bound_trivial_without_driving():
    rng = np.random.default_rng(26)
    system = random_chain_system(rng, 4, 0.005, coupling=0.5, drive=0.0)
    assert system.period <= 1.0 / (4.0 * system.metrics.lam)
    reports = lemma2_check(system)
    assert all(r.passed for r in reports)
    for r in reports:
        assert r.rhs == 0.0
        assert r.lhs <= r.budget


def test_stage_distance_bound_holds_in_regime():
    rng = np.random.default_rng(27)
    for seed in rng.integers(2**63, size=3):
        child = np.random.default_rng(seed)
        system = random_chain_system(child, 4, 0.004, coupling=0.5, drive=0.5)
        assert system.period <= 1.0 / (4.0 * system.metrics.lam)
        reports = lemma2_check(system)
        assert len(reports) == 4
        assert all(r.passed for r in reports), [
            (r.lhs, r.rhs, r.status) for r in reports
        ]


def test_stage_distance_bound_declares_out_of_regime():
    system = heisenberg_ring(4, 0.5)
    reports = lemma2_check(system)
    assert len(reports) == 1
    assert reports[0].status == "not-applicable"


def test_factorization_rejects_large_systems():
    system = heisenberg_ring(11, 0.1)
    with pytest.raises(ValueError):
        interaction_unitaries(system)
    with pytest.raises(ValueError):
        truncated_unitaries(system, 1)
