"""Operator-valued time polynomials: evaluation, commutators, integration."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fml import (
    PauliOperator,
    PauliString,
    PiecewisePolyOperator,
    TimePolyOperator,
    evaluate,
    integrate,
    operator_norm,
    poly_commutator,
)

from conftest import dense_oracle

N = 3
T1 = 0.7


def op(letter, site, c):
    return PauliOperator.from_strings(N, [PauliString((site,), letter, c)])


def near_zero(x, tol):
    return operator_norm(x) < tol


A = op("X", 0, 1.0) + op("Z", 1, -0.5)
B = op("Y", 1, 2.0)
C = op("Z", 2, 0.8)


@st.composite
def time_polys(draw, deg_max=6):
    deg = draw(st.integers(0, deg_max))
    coeffs = []
    for _ in range(deg + 1):
        letter = draw(st.sampled_from("XYZ"))
        site = draw(st.integers(0, N - 1))
        c = draw(st.floats(-2, 2, allow_nan=False))
        coeffs.append(op(letter, site, c))
    return TimePolyOperator(coeffs, T1)


# ---------------------------------------------------------------- evaluate

def test_constant_evaluates_to_itself():
    p = TimePolyOperator([A], T1)
    for t in (0.1, 0.35, T1):
        assert near_zero(evaluate(p, t) - A, 1e-15)


def test_linear_term_scales():
    p = TimePolyOperator([PauliOperator.zero(N), B], T1)
    assert near_zero(evaluate(p, 0.5) - B * 0.5, 1e-15)


def test_affine_at_endpoint():
    p = TimePolyOperator([A, B], T1)
    assert near_zero(evaluate(p, T1) - (A + B * T1), 1e-12)


def test_evaluate_outside_domain_rejected():
    p = TimePolyOperator([A], T1)
    with pytest.raises(ValueError):
        evaluate(p, T1 + 0.1)


# ---------------------------------------------------------------- commutator

def test_commutator_of_constant_with_itself_is_zero():
    p = TimePolyOperator([A], T1)
    c = poly_commutator(p, p)
    for t in (0.1, 0.5):
        assert near_zero(evaluate(c, t), 1e-14)


def test_commutator_antisymmetry():
    p = TimePolyOperator([A, B], T1)
    c = poly_commutator(p, p)
    assert all(near_zero(evaluate(c, t), 1e-13) for t in (0.2, 0.6))


@given(time_polys(deg_max=3), time_polys(deg_max=3))
def test_commutator_matches_dense_at_sampled_times(pa, pb):
    c = poly_commutator(pa, pb)
    for t in np.linspace(0.05, T1, 5):
        ad = dense_oracle(evaluate(pa, t), N)
        bd = dense_oracle(evaluate(pb, t), N)
        cd = dense_oracle(evaluate(c, t), N)
        assert np.max(np.abs(cd - (ad @ bd - bd @ ad))) < 1e-12


def test_commutator_degree_bound():
    pa = TimePolyOperator([A, B, C], T1)
    pb = TimePolyOperator([B, C], T1)
    c = poly_commutator(pa, pb)
    assert len(c.coeffs) - 1 <= (len(pa.coeffs) - 1) + (len(pb.coeffs) - 1)


# ---------------------------------------------------------------- integrate

def test_integral_of_constant_is_linear():
    p = TimePolyOperator([B], T1)
    assert near_zero(evaluate(integrate(p), 0.4) - B * 0.4, 1e-14)


def test_power_rule_on_linear_term():
    p = TimePolyOperator([PauliOperator.zero(N), B], T1)
    assert near_zero(evaluate(integrate(p), T1) - B * (T1**2 / 2), 1e-13)


def test_integral_of_zero_is_zero():
    p = TimePolyOperator([PauliOperator.zero(N)], T1)
    assert near_zero(evaluate(integrate(p), 0.5), 1e-15)


def test_integrate_raises_degree_exactly_one():
    p = TimePolyOperator([A, B, C], T1)
    assert integrate(p).degree == p.degree + 1


@given(time_polys())
def test_integral_matches_gauss_legendre_oracle(p):
    # degree <= 6, so 4-point Gauss-Legendre integrates it exactly
    t_hi = 0.55
    nodes, weights = np.polynomial.legendre.leggauss(4)
    acc = np.zeros((2**N, 2**N), dtype=complex)
    for x, w in zip(nodes, weights):
        t = 0.5 * t_hi * (x + 1.0)
        acc += 0.5 * t_hi * w * dense_oracle(evaluate(p, t), N)
    got = dense_oracle(evaluate(integrate(p), t_hi), N)
    assert np.max(np.abs(got - acc)) < 1e-12


# ---------------------------------------------------------------- piecewise

def test_piecewise_integral_splits_at_breakpoints():
    seg1 = TimePolyOperator([A], 0.3)
    seg2 = TimePolyOperator([B], 0.7, 0.3)
    pw = PiecewisePolyOperator([seg1, seg2])
    total = pw.definite_integral(0.0, 0.7)
    assert near_zero(total - (A * 0.3 + B * 0.4), 1e-13)


def test_piecewise_evaluate_picks_correct_segment():
    seg1 = TimePolyOperator([A], 0.3)
    seg2 = TimePolyOperator([B], 0.7, 0.3)
    pw = PiecewisePolyOperator([seg1, seg2])
    assert near_zero(evaluate(pw, 0.1) - A, 1e-15)
    assert near_zero(evaluate(pw, 0.5) - B, 1e-15)
