"""Operator layer against an independent dense-kron oracle."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fml import (
    PauliOperator,
    PauliString,
    commutator,
    extensiveness,
    heisenberg_ring,
    locality_metrics,
    multiply,
    operator_norm,
    to_dense,
)

from conftest import dense_oracle, kron_string

# ---------------------------------------------------------------- strategies

letters_st = st.sampled_from("XYZ")


@st.composite
def pauli_strings(draw, n_sites=4):
    width = draw(st.integers(1, n_sites))
    start = draw(st.integers(0, n_sites - width))
    sites = tuple(range(start, start + width))
    letters = "".join(draw(letters_st) for _ in sites)
    coeff = draw(
        st.complex_numbers(min_magnitude=0.01, max_magnitude=3, allow_nan=False)
    )
    return PauliString(sites, letters, coeff)


@st.composite
def pauli_operators(draw, n_sites=4, max_terms=4):
    n_terms = draw(st.integers(1, max_terms))
    return PauliOperator.from_strings(
        n_sites, [draw(pauli_strings(n_sites)) for _ in range(n_terms)]
    )


# ---------------------------------------------------------------- product

@given(pauli_strings(), pauli_strings())
def test_string_product_matches_kron_oracle(a, b):
    prod = multiply(a, b)
    lhs = prod.coefficient * kron_string(4, prod.sites, prod.letters)
    rhs = kron_string(4, a.sites, a.letters) @ kron_string(4, b.sites, b.letters)
    rhs *= a.coefficient * b.coefficient
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_string_self_product_is_identity():
    s = PauliString((0, 2), "XZ", 1.0)
    p = multiply(s, s)
    assert p.sites == () and p.letters == "" and p.coefficient == 1.0 + 0j


@given(pauli_operators(), pauli_operators())
def test_commutator_matches_dense_oracle(a, b):
    c = commutator(a, b)
    ad, bd = dense_oracle(a, 4), dense_oracle(b, 4)
    assert np.max(np.abs(dense_oracle(c, 4) - (ad @ bd - bd @ ad))) < 1e-10


@given(pauli_operators())
def test_self_commutator_vanishes(a):
    c = commutator(a, a)
    assert operator_norm(c) < 1e-12


@given(pauli_operators())
def test_to_dense_matches_oracle(a):
    assert np.max(np.abs(to_dense(a, 4) - dense_oracle(a, 4))) < 1e-12


# ---------------------------------------------------------------- norms

def test_single_string_norm_is_coefficient_magnitude():
    op = PauliOperator.from_strings(3, [PauliString((1,), "Y", -2.5 + 0j)])
    assert operator_norm(op) == pytest.approx(2.5, abs=1e-14)


@given(pauli_operators())
def test_operator_norm_upper_bounds_spectral_norm(a):
    dense = dense_oracle(a, 4)
    spec = float(np.linalg.norm(dense, 2))
    assert spec <= operator_norm(a) * (1 + 1e-9) + 1e-12


def test_composite_same_support_norm_is_spectral():
    # X and Z on one site: per-support block is diagonalized exactly,
    # giving sqrt(2), not the coefficient sum 2
    op = PauliOperator.from_strings(
        2, [PauliString((0,), "X", 1.0), PauliString((0,), "Z", 1.0)]
    )
    assert operator_norm(op) == pytest.approx(np.sqrt(2.0), abs=1e-12)


# ---------------------------------------------------------------- structure

def test_mixed_site_universes_refuse_to_combine():
    a = PauliOperator.from_strings(2, [PauliString((0,), "X", 1.0)])
    b = PauliOperator.from_strings(3, [PauliString((0,), "X", 1.0)])
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        commutator(a, b)


def test_extensiveness_of_known_operator():
    # two bond terms meeting at site 1: k = 2, per-site sum maximal there
    op = PauliOperator.from_strings(
        3,
        [PauliString((0, 1), "XX", 0.5), PauliString((1, 2), "ZZ", -1.0)],
    )
    k, j = extensiveness(op)
    assert k == 2
    assert j == pytest.approx(1.5, abs=1e-14)


def test_ring_metrics_match_hand_computation():
    # per site: two bonds with |jx|+|jy|+|jz| each, plus the drive envelope
    # max over the period, |drive| * T
    n, period = 8, 0.2
    system = heisenberg_ring(n, period)
    m = locality_metrics(system)
    j_expect = 2 * (1.5 + 1.0 + 0.5) + 1.0 * period
    assert m.k == 2
    assert m.j == pytest.approx(j_expect, rel=1e-12)
    assert m.lam == pytest.approx(2 * 2 * j_expect, rel=1e-12)
    assert m.lam_tilde == pytest.approx(6 * 4 * j_expect, rel=1e-12)
    # V0: the period average of sum_i |t| is N*T/2
    assert m.v0 == pytest.approx(n * period / 2, rel=1e-12)
    assert sum(m.vi) == pytest.approx(m.v0, rel=1e-12)


def test_locality_metrics_tau_definition():
    system = heisenberg_ring(4, 0.1)
    m = locality_metrics(system)
    assert m.tau == pytest.approx(1.0 / (8.0 * m.lam_tilde), rel=1e-14)
