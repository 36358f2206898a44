"""Random driven systems and local operators for the verification suites.

All generators take a ``numpy.random.Generator`` so that suites can shard
instances deterministically via ``SeedSequence.spawn``.  Coefficients are
real (operators Hermitian) by construction.
"""

from __future__ import annotations

import numpy as np

from .pauli_algebra import PauliOperator, PauliString
from .system import DrivenSystem, chain_bonds, ring_bonds
from .time_poly import PiecewisePolyOperator, TimePolyOperator

__all__ = [
    "random_chain_system",
    "random_local_operator",
    "toy_linear_system",
]

_LETTERS = "XYZ"


def random_local_operator(
    rng: np.random.Generator,
    n_sites: int,
    k: int = 2,
    n_terms: int = 4,
    scale: float = 1.0,
) -> PauliOperator:
    """Hermitian operator with ``n_terms`` random strings on at most ``k``
    sites each (supports drawn as random contiguous windows)."""
    strings = []
    for _ in range(n_terms):
        width = int(rng.integers(1, k + 1))
        start = int(rng.integers(0, n_sites - width + 1))
        sites = tuple(range(start, start + width))
        letters = "".join(rng.choice(list(_LETTERS)) for _ in sites)
        coeff = float(rng.normal(0.0, scale))
        strings.append(PauliString(sites, letters, coeff))
    return PauliOperator.from_strings(n_sites, strings)


def toy_linear_system(
    a: PauliOperator,
    b: PauliOperator,
    period: float,
    bonds: tuple[tuple[int, int], ...] | None = None,
) -> DrivenSystem:
    """System with H(t) = A + t*B on (0, period] (single segment)."""
    n = a.n_sites
    driving = PiecewisePolyOperator.single([PauliOperator.zero(n), b], period)
    if bonds is None:
        bonds = chain_bonds(n)
    return DrivenSystem(n, bonds, a, driving, period)


def random_chain_system(
    rng: np.random.Generator,
    n_sites: int,
    period: float,
    *,
    geometry: str = "chain",
    degree: int = 1,
    segments: int = 1,
    coupling: float = 1.0,
    drive: float = 1.0,
    zero_average: bool = False,
) -> DrivenSystem:
    """Random nearest-neighbour system with polynomial driving.

    The static part holds one random two-site string per bond plus one
    random single-site field per site.  The driving carries, per segment,
    random single-site polynomials of the given degree.  With
    ``zero_average`` the driving is shifted so its period average vanishes
    (the gauge in which the zeroth series term equals the static part).
    """
    bonds = ring_bonds(n_sites) if geometry == "ring" else chain_bonds(n_sites)
    strings = []
    for a, b in bonds:
        lo, hi = min(a, b), max(a, b)
        letters = "".join(rng.choice(list(_LETTERS)) for _ in range(2))
        strings.append(PauliString((lo, hi), letters, float(rng.normal(0, coupling))))
    for i in range(n_sites):
        letters = str(rng.choice(list(_LETTERS)))
        strings.append(PauliString((i,), letters, float(rng.normal(0, coupling))))
    static = PauliOperator.from_strings(n_sites, strings)

    cuts = np.sort(rng.uniform(0.15 * period, 0.85 * period, size=segments - 1))
    edges = [0.0, *map(float, cuts), period]
    segs = []
    for t0, t1 in zip(edges[:-1], edges[1:]):
        coeffs = []
        for _power in range(degree + 1):
            site_strings = [
                PauliString((i,), str(rng.choice(list(_LETTERS))),
                            float(rng.normal(0, drive)))
                for i in range(n_sites)
            ]
            coeffs.append(PauliOperator.from_strings(n_sites, site_strings))
        segs.append(TimePolyOperator(coeffs, t1, t0))
    driving = PiecewisePolyOperator(segs)

    if zero_average:
        mean = driving.definite_integral(0.0, period) * (1.0 / period)
        shifted = []
        for seg in driving.segments:
            coeffs = list(seg.coeffs)
            coeffs[0] = coeffs[0] - mean
            shifted.append(TimePolyOperator(coeffs, seg.t1, seg.t0, seg.offset))
        driving = PiecewisePolyOperator(shifted)

    return DrivenSystem(n_sites, bonds, static, driving, period)
