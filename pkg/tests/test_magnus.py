"""Series generation against closed forms, quadrature oracles, and the
factorial envelope."""

import numpy as np
import pytest

from fml import (
    PauliOperator,
    PauliString,
    commutator,
    heisenberg_ring,
    lemma1_bound,
    locality_metrics,
    omega_direct,
    omega_series,
    operator_norm,
    optimal_order_n0,
    spectral_norm,
    to_dense,
    truncate,
    w_tilde,
)
from fml.instances import random_chain_system, toy_linear_system

from conftest import dense_oracle


def two_site_ops(rng, n):
    a = PauliOperator.from_strings(
        n,
        [
            PauliString((i, i + 1), "".join(rng.choice(list("XYZ"), 2)),
                        float(rng.normal()))
            for i in range(n - 1)
        ],
    )
    b = PauliOperator.from_strings(
        n,
        [PauliString((i,), str(rng.choice(list("XYZ"))), float(rng.normal()))
         for i in range(n)],
    )
    return a, b


# ---------------------------------------------------------------- closed forms

def test_constant_hamiltonian_has_no_higher_terms():
    rng = np.random.default_rng(0)
    a, _ = two_site_ops(rng, 3)
    zero_drive = toy_linear_system(a, PauliOperator.zero(3), 0.4)
    # replace driving with true zero: A + t*0
    series = omega_series(zero_drive, 4)
    for n in range(1, 5):
        assert series.omega_norm(n) < 1e-13


def test_linear_model_zeroth_term_is_time_average():
    rng = np.random.default_rng(1)
    a, b = two_site_ops(rng, 3)
    t_per = 0.3
    system = toy_linear_system(a, b, t_per)
    got = omega_direct(system, 0)
    expect = a + b * (t_per / 2)
    assert operator_norm(got - expect) < 1e-13


def test_linear_model_first_term_closed_form():
    # H = A + tB on (0, T] has first correction (iT/12)[A, B]; with the
    # package's Hermitian convention that is (T/12) * i[A,B]
    rng = np.random.default_rng(2)
    a, b = two_site_ops(rng, 3)
    t_per = 0.25
    system = toy_linear_system(a, b, t_per)
    got = to_dense(omega_direct(system, 1), 3)
    comm = dense_oracle(commutator(a, b), 3)
    expect = 1j * t_per / 12.0 * comm
    assert np.max(np.abs(got - expect)) < 1e-12


def test_second_term_matches_simplex_quadrature_oracle():
    # oracle: the printed double/triple integrals evaluated by Gauss-Legendre
    # over the ordered simplex, with dense matrices throughout
    rng = np.random.default_rng(3)
    a, b = two_site_ops(rng, 3)
    t_per = 0.3
    system = toy_linear_system(a, b, t_per)
    ad, bd = dense_oracle(a, 3), dense_oracle(b, 3)

    def h(t):
        return ad + t * bd

    nodes, weights = np.polynomial.legendre.leggauss(24)

    def seg(lo, hi):
        return [(0.5 * (hi - lo) * x + 0.5 * (hi + lo), 0.5 * (hi - lo) * w)
                for x, w in zip(nodes, weights)]

    def comm(x, y):
        return x @ y - y @ x

    # second-order term of the period exponent, divided by T^3 per the
    # series convention Exponent = sum_n T^(n+1) Omega_n
    acc2 = np.zeros_like(ad)
    for t1, w1 in seg(0.0, t_per):
        for t2, w2 in seg(0.0, t1):
            acc2 += w1 * w2 * comm(h(t1), h(t2))
    omega1_oracle = acc2 / (2j * t_per**2)

    acc3 = np.zeros_like(ad)
    for t1, w1 in seg(0.0, t_per):
        for t2, w2 in seg(0.0, t1):
            for t3, w3 in seg(0.0, t2):
                acc3 += w1 * w2 * w3 * (
                    comm(h(t1), comm(h(t2), h(t3)))
                    + comm(h(t3), comm(h(t2), h(t1)))
                )
    omega2_oracle = -acc3 / (6.0 * t_per**3)

    assert np.max(np.abs(to_dense(omega_direct(system, 1), 3) - omega1_oracle)) < 1e-10
    assert np.max(np.abs(to_dense(omega_direct(system, 2), 3) - omega2_oracle)) < 1e-10


def test_series_agrees_with_direct_low_orders():
    rng = np.random.default_rng(4)
    for trial in range(6):
        child = np.random.default_rng(rng.integers(2**63))
        a, b = two_site_ops(child, 4)
        system = toy_linear_system(a, b, 0.2)
        series = omega_series(system, 2)
        for n in range(3):
            diff = spectral_norm(
                series.omega_dense(n) - to_dense(omega_direct(system, n), 4)
            )
            assert diff < 1e-12, (trial, n, diff)


# ---------------------------------------------------------------- invariants

def test_every_generated_order_is_hermitian():
    rng = np.random.default_rng(5)
    system = random_chain_system(rng, 4, 0.15, degree=2, segments=2)
    series = omega_series(system, 8)
    assert series.herm_defect < 1e-12


def test_zero_average_gauge_makes_order_zero_the_static_part():
    rng = np.random.default_rng(6)
    system = random_chain_system(rng, 4, 0.2, zero_average=True)
    series = omega_series(system, 0)
    static = to_dense(system.static, 4)
    assert spectral_norm(series.omega_dense(0) - static) < 1e-12


def test_terms_invariant_under_period_rescaling():
    # stretching the protocol (T -> sT with H(t) -> H(t/s)) reproduces the
    # same evolution run at s-fold strength, so every Omega_n is unchanged
    rng = np.random.default_rng(7)
    a, b = two_site_ops(rng, 3)
    t_per, s = 0.2, 2.0
    fast = toy_linear_system(a, b, t_per)
    slow = toy_linear_system(a, b * (1.0 / s), s * t_per)
    fser = omega_series(fast, 6)
    sser = omega_series(slow, 6)
    for n in range(7):
        d = spectral_norm(fser.omega_dense(n) - sser.omega_dense(n))
        assert d < 1e-11, (n, d)


def test_term_norms_respect_factorial_envelope():
    rng = np.random.default_rng(8)
    for seed in rng.integers(2**63, size=5):
        child = np.random.default_rng(seed)
        system = random_chain_system(child, 4, 0.1)
        metrics = locality_metrics(system)
        series = omega_series(system, 8)
        for n in range(1, 9):
            assert series.omega_norm(n) <= lemma1_bound(n, metrics) * (1 + 1e-9)


# ---------------------------------------------------------------- truncation

def test_truncate_order_zero_is_first_term(ring6, ring6_series):
    t0 = truncate(ring6_series, 0)
    assert spectral_norm(t0.operator - ring6_series.omega_dense(0)) == 0.0


def test_truncate_sums_weighted_terms(ring6, ring6_series):
    t2 = truncate(ring6_series, 2)
    expect = sum(
        ring6_series.omega_dense(n) * ring6.period**n for n in range(3)
    )
    assert spectral_norm(t2.operator - expect) < 1e-13


def test_truncate_rejects_out_of_range(ring6_series):
    with pytest.raises(ValueError):
        truncate(ring6_series, ring6_series.n_max + 1)
    with pytest.raises(ValueError):
        truncate(ring6_series, -1)


# ---------------------------------------------------------------- bound scalars

def test_envelope_closed_forms():
    system = heisenberg_ring(4, 0.1)
    m = locality_metrics(system)
    assert lemma1_bound(1, m) == pytest.approx(m.v0 * m.lam / 2, rel=1e-12)
    assert lemma1_bound(2, m) == pytest.approx(4 * m.v0 * m.lam**2 / 9, rel=1e-12)
    with pytest.raises(ValueError):
        lemma1_bound(0, m)


def test_envelope_vanishes_without_driving():
    rng = np.random.default_rng(9)
    system = random_chain_system(rng, 4, 0.1, drive=0.0)
    m = locality_metrics(system)
    assert m.v0 == 0.0
    assert lemma1_bound(3, m) == 0.0


def test_optimal_order_floor_values():
    system = heisenberg_ring(4, 0.1)
    m = locality_metrics(system)
    for lam_t, expect in [(1 / 32, 2), (1 / 16, 1), (1.0, 0), (1 / 48.5, 3)]:
        period = lam_t / m.lam
        assert optimal_order_n0(m, period) == expect


def test_w_tilde_closed_forms():
    system = heisenberg_ring(4, 0.1)
    m = locality_metrics(system)
    assert w_tilde(1, m) == pytest.approx(2 * m.lam / 3, rel=1e-12)
    assert w_tilde(2, m) == pytest.approx(64 * m.lam**2 / 81, rel=1e-12)


def test_log_domain_envelope_survives_large_orders():
    system = heisenberg_ring(4, 0.1)
    m = locality_metrics(system)
    log_val = lemma1_bound(300, m, as_log10=True)
    assert np.isfinite(log_val) and log_val > 100
