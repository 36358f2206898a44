"""Shared fixtures: small cached systems and a CI-friendly hypothesis profile."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=25,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


# dense single-site Pauli matrices for building independent oracles; tests
# deliberately do NOT reuse the package's to_dense for these
SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_string(n_sites: int, sites, letters) -> np.ndarray:
    """Oracle dense matrix of a Pauli string via explicit kron products."""
    out = np.array([[1.0 + 0j]])
    placed = dict(zip(sites, letters))
    for i in range(n_sites):
        out = np.kron(out, SIGMA[placed.get(i, "I")])
    return out


def dense_oracle(op, n_sites: int) -> np.ndarray:
    """Oracle dense matrix of a PauliOperator, term by term."""
    dim = 2**n_sites
    out = np.zeros((dim, dim), dtype=complex)
    for (sites, letters), coeff in op.terms.items():
        out += coeff * kron_string(n_sites, sites, letters)
    return out


@pytest.fixture(scope="session")
def oracle():
    return dense_oracle


@pytest.fixture(scope="session")
def ring6():
    from fml import heisenberg_ring

    return heisenberg_ring(6, 0.05)


@pytest.fixture(scope="session")
def ring6_series(ring6):
    from fml import omega_series

    return omega_series(ring6, 6)


@pytest.fixture(scope="session")
def ring6_floquet(ring6):
    from fml import exact_floquet

    return exact_floquet(ring6, tol=1e-12)
