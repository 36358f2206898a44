"""Every inequality checker: trivial cases, in-regime passes, and the
declared not-applicable exits."""

import numpy as np
import pytest

from fml import (
    EnergyFilter,
    PauliOperator,
    PauliString,
    absorption_probability,
    check_corollary1,
    check_lemma3,
    check_lemma4,
    check_lemma5,
    check_lemma6,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    exact_floquet,
    heisenberg_ring,
    measure_lr_profile,
    omega_series,
    operator_norm,
    optimal_order_n0,
    truncate,
)
from fml.instances import random_chain_system


def one(sites, letters, coeff, n=6):
    return PauliOperator.from_strings(n, [PauliString(sites, letters, coeff)])


@pytest.fixture(scope="module")
def weak6():
    # ring far inside the convergence regime: lam*T ~ 0.014, n0 = 4
    return heisenberg_ring(6, 0.001, jx=0.9, jy=0.6, jz=0.3, drive=0.8)


@pytest.fixture(scope="module")
def weak6_series(weak6):
    n0 = optimal_order_n0(weak6.metrics, weak6.period)
    return omega_series(weak6, max(n0, 5))


@pytest.fixture(scope="module")
def weak6_uf(weak6):
    return exact_floquet(weak6, tol=1e-12)


@pytest.fixture(scope="module")
def still4():
    # no driving at all; every propagator statement becomes trivial
    rng = np.random.default_rng(30)
    return random_chain_system(rng, 4, 0.004, coupling=0.5, drive=0.0)


# ----------------------------------------------------------------- theorem 1

def test_stroboscopic_bound_trivial_without_driving(still4):
    series = omega_series(still4, optimal_order_n0(still4.metrics, still4.period))
    reports = check_theorem1(still4, series, 10, tol=1e-12)
    assert len(reports) == 10
    for r in reports:
        assert r.rhs == 0.0
        assert r.passed, (r.lhs, r.budget)


def test_stroboscopic_bound_passes_in_regime(weak6, weak6_series, weak6_uf):
    reports = check_theorem1(weak6, weak6_series, 20, u_f=weak6_uf)
    assert all(r.passed for r in reports)
    assert reports[0].params["n0"] == 4
    # rhs grows exactly linearly with the period count
    for m, r in enumerate(reports, start=1):
        assert r.rhs == pytest.approx(m * reports[0].rhs, rel=1e-12)
        assert r.params["m"] == m


def test_stroboscopic_bound_declares_out_of_regime():
    system = heisenberg_ring(4, 0.5)
    series = omega_series(system, 1)
    reports = check_theorem1(system, series, 5)
    assert len(reports) == 1
    assert reports[0].status == "not-applicable"


def test_stroboscopic_bound_needs_enough_orders(weak6):
    shallow = omega_series(weak6, 1)  # n0 = 4 > 1
    with pytest.raises(ValueError):
        check_theorem1(weak6, shallow, 3)


# ---------------------------------------------------------------- corollary 1

def test_single_period_bound_at_low_orders(weak6, weak6_series, weak6_uf):
    for n in range(3):
        r = check_corollary1(weak6, weak6_series, n, u_f=weak6_uf)
        assert r.passed, (n, r.lhs, r.rhs)
    # the truncation tail shrinks as more orders are kept
    r0 = check_corollary1(weak6, weak6_series, 0, u_f=weak6_uf)
    r2 = check_corollary1(weak6, weak6_series, 2, u_f=weak6_uf)
    assert r2.rhs < r0.rhs


def test_single_period_bound_refuses_orders_past_n0(weak6, weak6_series, weak6_uf):
    r = check_corollary1(weak6, weak6_series, 5, u_f=weak6_uf)
    assert r.status == "not-applicable"


def test_single_period_bound_trivial_without_driving(still4):
    series = omega_series(still4, 2)
    r = check_corollary1(still4, series, 0, tol=1e-12)
    assert r.rhs == 0.0 and r.passed


# ------------------------------------------------------------------- profiles

def test_profile_entries_bounded_and_monotone(weak6, weak6_uf):
    times = [m * weak6.period for m in range(1, 6)]
    prof = measure_lr_profile(weak6, times, site=0, u_f=weak6_uf)
    assert np.all(prof.g >= 0.0) and np.all(prof.g <= 2.0)
    assert np.all(np.diff(prof.g, axis=0) >= -1e-12)
    # lookup matches the stored grid, conservative rounding up in time
    assert prof.g_at(0, times[2]) == prof.g[2, 0]
    assert prof.g_at(0, times[2] - 0.3 * weak6.period) == prof.g[2, 0]
    with pytest.raises(ValueError):
        prof.g_at(0, times[-1] * 2)


def test_profile_sees_no_spreading_without_a_hamiltonian():
    from fml import DrivenSystem, PiecewisePolyOperator, TimePolyOperator

    n = 4
    zero = PauliOperator.zero(n)
    seg = TimePolyOperator([zero], 0.5, 0.0, 0)
    frozen = DrivenSystem(
        n, [(i, i + 1) for i in range(n - 1)], zero,
        PiecewisePolyOperator([seg]), 0.5,
    )
    prof = measure_lr_profile(frozen, [0.5, 1.0], site=0, tol=1e-12)
    # on-site commutators are maximal ([X, Y] etc.), all others never move
    assert prof.g_at(0, 1.0) == pytest.approx(2.0)
    for d in prof.distances[1:]:
        assert prof.g_at(d, 1.0) < 1e-12


def test_profile_shows_a_light_cone(ring6, ring6_floquet):
    times = [m * ring6.period for m in range(1, 4)]
    prof = measure_lr_profile(ring6, times, site=0, u_f=ring6_floquet)
    far = prof.distances[-1]
    assert prof.g_at(far, times[0]) < 0.1 * prof.g_at(0, times[0])


# ------------------------------------------------------------------ theorem 2

def test_local_observable_bound_passes_in_regime(weak6, weak6_series, weak6_uf):
    m_max = 5
    times = [m * weak6.period for m in range(1, m_max + 1)]
    prof = measure_lr_profile(weak6, times, site=0, u_f=weak6_uf)
    reports = check_theorem2(
        weak6, weak6_series, (0,), m_max, profile=prof, u_f=weak6_uf
    )
    assert len(reports) == m_max
    for r in reports:
        assert r.passed, (r.params["m"], r.lhs, r.rhs)
        assert r.params["rhs_packaged"] > 0.0


def test_local_observable_bound_trivial_without_driving(still4):
    series = omega_series(still4, optimal_order_n0(still4.metrics, still4.period))
    u_f = exact_floquet(still4, tol=1e-12)
    times = [m * still4.period for m in range(1, 4)]
    prof = measure_lr_profile(still4, times, site=0, u_f=u_f)
    reports = check_theorem2(still4, series, (1,), 3, profile=prof, u_f=u_f)
    for r in reports:
        assert r.lhs < 1e-10
        assert r.passed


def test_local_observable_bound_declares_out_of_regime(ring6, ring6_series):
    times = [ring6.period]
    prof = measure_lr_profile(ring6, times, site=0, tol=1e-10)
    reports = check_theorem2(ring6, ring6_series, (0,), 1, profile=prof)
    assert len(reports) == 1
    assert reports[0].status == "not-applicable"


# -------------------------------------------------------------- energy filter

def test_filter_projections_resolve_the_identity():
    rng = np.random.default_rng(31)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = a + a.conj().T
    filt = EnergyFilter(h)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi /= np.linalg.norm(psi)
    thr = float(np.median(filt.energies))
    up = filt.project_above(psi, thr)
    down = filt.project_below(psi, thr)
    assert np.max(np.abs(up + down - psi)) < 1e-12
    assert abs(np.vdot(up, down)) < 1e-12
    assert filt.weight_above(psi, thr) == pytest.approx(
        float(np.linalg.norm(up) ** 2)
    )


def test_filter_rejects_bad_input():
    with pytest.raises(ValueError):
        EnergyFilter(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        EnergyFilter(np.zeros((2, 3)))


# ------------------------------------------------------- absorption probability

def test_absorption_probability_edges(weak6, weak6_series, weak6_uf):
    trunc = truncate(weak6_series, 0)
    w, v = np.linalg.eigh(trunc.operator)
    psi0 = v[:, 0]
    floor = float(w[0]) + 1e-6
    span = float(w[-1] - w[0])
    # no state can climb past the top of the spectrum
    assert absorption_probability(
        weak6_series, 0, psi0, floor, 2 * span, 1, u_f=weak6_uf
    ) == 0.0
    # zero periods leave the ground state where it started (re-expanding
    # in the filter basis costs a squared rounding error at worst)
    assert absorption_probability(
        weak6_series, 0, psi0, floor, 0.5 * span, 0, u_f=weak6_uf
    ) < 1e-28
    # a state already above the floor is rejected
    with pytest.raises(ValueError):
        absorption_probability(
            weak6_series, 0, v[:, -1], floor, 0.1, 1, u_f=weak6_uf
        )


def test_absorption_is_frozen_without_driving(still4):
    series = omega_series(still4, 0)
    u_f = exact_floquet(still4, tol=1e-12)
    trunc = truncate(series, 0)
    w, v = np.linalg.eigh(trunc.operator)
    psi0 = v[:, 0]
    span = float(w[-1] - w[0])
    p = absorption_probability(
        series, 0, psi0, float(w[0]) + 1e-6, 0.3 * span, 50, u_f=u_f
    )
    assert p <= 1e-20


# ------------------------------------------------------------------ theorem 3

def test_heating_bound_passes_in_regime(weak6, weak6_series, weak6_uf):
    assert weak6.period <= weak6.metrics.tau
    trunc = truncate(weak6_series, 0)
    w, v = np.linalg.eigh(trunc.operator)
    span = float(w[-1] - w[0])
    de_grid = [0.1 * span, 0.2 * span, 0.3 * span, 0.4 * span]
    reports = check_theorem3(
        weak6, weak6_series, 0, v[:, 0], float(w[0]) + 1e-6,
        de_grid, 10, u_f=weak6_uf,
    )
    points, slope = reports[:-1], reports[-1]
    assert len(points) == len(de_grid)
    assert all(r.passed for r in points)
    assert slope.name == "theorem3-decay-slope"


def test_heating_bound_closed_form_without_driving():
    rng = np.random.default_rng(34)
    system = random_chain_system(rng, 4, 0.0005, coupling=0.5, drive=0.0)
    assert system.period <= system.metrics.tau
    series = omega_series(system, 0)
    u_f = exact_floquet(system, tol=1e-12)
    trunc = truncate(series, 0)
    w, v = np.linalg.eigh(trunc.operator)
    tau = system.metrics.tau
    de = 0.4 * float(w[-1] - w[0])
    reports = check_theorem3(
        system, series, 0, v[:, 0], float(w[0]) + 1e-6, [de], 20, u_f=u_f
    )
    point, slope = reports
    # with V0 = 0 the drift and leak terms vanish identically
    assert point.rhs == pytest.approx(np.exp(-2.0 * tau * de), rel=1e-12)
    assert point.lhs <= 1e-18
    assert slope.status == "not-applicable"


def test_heating_bound_declares_out_of_regime(ring6, ring6_series):
    psi = np.zeros(2**6)
    psi[0] = 1.0
    reports = check_theorem3(ring6, ring6_series, 0, psi, 0.0, [1.0], 3)
    assert len(reports) == 1
    assert reports[0].status == "not-applicable"
    assert "tau" in reports[0].params["reason"] or "tau" in str(reports[0].params)


def test_heating_bound_refuses_orders_past_n0(weak6, weak6_series, weak6_uf):
    psi = np.zeros(2**6)
    psi[0] = 1.0
    n0 = optimal_order_n0(weak6.metrics, weak6.period)
    reports = check_theorem3(
        weak6, weak6_series, n0 + 1, psi, 1e6, [1.0], 1, u_f=weak6_uf
    )
    assert reports[0].status == "not-applicable"


# ----------------------------------------------------------- lemmas 3, 4, 5

CHAIN = [
    one((0, 1), "XY", 0.7),
    one((1, 2), "ZX", -0.5),
    one((2, 3), "YZ", 0.9),
    one((3, 4), "XX", 0.4),
]


def test_nested_commutator_bound_on_a_live_chain():
    r = check_lemma3(CHAIN, one((0,), "Z", 1.3))
    assert r.lhs > 0.0
    assert r.passed


def test_nested_commutator_bound_with_dead_chain():
    # the first link commutes with the observable: everything collapses
    r = check_lemma3([one((3, 4), "XX", 1.0)], one((0,), "Z", 1.0))
    assert r.lhs == 0.0 and r.passed
    with pytest.raises(ValueError):
        check_lemma3([], one((0,), "Z", 1.0))


def test_nested_commutator_bound_randomized():
    rng = np.random.default_rng(32)
    letters = list("XYZ")
    for _ in range(20):
        ops = []
        for i in range(3):
            s = int(rng.integers(0, 5))
            ops.append(one((s, s + 1), "".join(rng.choice(letters, 2)),
                           float(rng.normal())))
        o_l = one((int(rng.integers(0, 6)),), str(rng.choice(letters)),
                  float(rng.normal()))
        assert check_lemma3(ops, o_l).passed


def test_single_commutator_extensive_bound():
    h = heisenberg_ring(6, 0.1).static
    a = one((2,), "X", 1.0)
    r = check_lemma4(h, a)
    assert r.passed and r.lhs > 0.0
    # hand-checkable corner: [Z, X] = 2iY on one site
    r2 = check_lemma4(one((0,), "Z", 1.0, n=1), one((0,), "X", 1.0, n=1))
    assert r2.lhs == pytest.approx(2.0)
    assert r2.rhs == pytest.approx(6.0)


def test_nested_extensiveness_bound():
    r = check_lemma5(CHAIN)
    assert r.passed and r.lhs > 0.0
    with pytest.raises(ValueError):
        check_lemma5(CHAIN[:1])
    rng = np.random.default_rng(33)
    letters = list("XYZ")
    for _ in range(20):
        ops = []
        for i in range(2):
            s = int(rng.integers(0, 5))
            ops.append(one((s, s + 1), "".join(rng.choice(letters, 2)),
                           float(rng.normal())))
        assert check_lemma5(ops).passed


# -------------------------------------------------------------------- lemma 6

def test_similarity_growth_bound_with_wide_support(weak6, weak6_series):
    a = one((0, 1, 2, 3, 4, 5), "ZZXXYZ", 0.6)
    r = check_lemma6(weak6_series, a, weak6.metrics.tau, weak6.metrics)
    assert r.passed, (r.lhs, r.rhs)
    assert r.params["n_a"] >= 3


def test_similarity_growth_bound_floors_out_for_narrow_support(
    weak6, weak6_series
):
    a = one((0,), "X", 1.0)
    r = check_lemma6(weak6_series, a, weak6.metrics.tau, weak6.metrics)
    assert r.status == "not-applicable"
    assert r.params["rhs_repaired"] > r.params["spectral_floor"] / 2


def test_similarity_growth_bound_rejects_bad_x(weak6, weak6_series):
    a = one((0, 1, 2), "XYZ", 1.0)
    assert check_lemma6(
        weak6_series, a, -0.1, weak6.metrics
    ).status == "not-applicable"
    assert check_lemma6(
        weak6_series, a, 10 * weak6.metrics.tau, weak6.metrics
    ).status == "not-applicable"


# ---------------------------------------------------------------- report shape

def test_reports_carry_consistent_margins():
    r = check_lemma4(one((0,), "Z", 1.0, n=2), one((1,), "X", 1.0, n=2))
    assert r.margin == pytest.approx(r.rhs - r.lhs)
    assert r.passed == (r.status == "pass")
    assert r.applicable
