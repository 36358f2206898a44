"""Exact algebra of multi-site spin-1/2 operators as sums of Pauli strings.

A Pauli string is a tensor product of single-site X/Y/Z factors on a sparse
set of sites (identity elsewhere) with a complex coefficient.  Operators are
finite weighted sums of such strings over a fixed site universe.  Products
and commutators are evaluated exactly through the single-site multiplication
table, so small-system algebra carries no floating-point error beyond the
coefficient arithmetic itself.

The module also computes the locality data of a periodically driven system:
the maximum interaction range k, the per-site interaction strength J
(a supremum over one driving period), the derived rates lam = 2*k*J and
lam_tilde = 6*k**2*J, the time-averaged driving strength V0, and its
per-site split Vi.  These are the inputs to every rigorous truncation bound
in :mod:`fml.bounds`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

import numpy as np

from ._scalarpoly import poly_abs_integral, poly_abs_max

__all__ = [
    "LocalityMetrics",
    "PauliOperator",
    "PauliString",
    "commutator",
    "extensiveness",
    "locality_metrics",
    "multiply",
    "operator_norm",
    "to_dense",
]

_LETTERS = frozenset("XYZ")

# Single-site products P*Q -> (phase, result letter); "" denotes identity.
_MUL: dict[tuple[str, str], tuple[complex, str]] = {
    ("X", "X"): (1.0, ""),
    ("Y", "Y"): (1.0, ""),
    ("Z", "Z"): (1.0, ""),
    ("X", "Y"): (1j, "Z"),
    ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("X", "Z"): (-1j, "Y"),
}

Key = tuple[tuple[int, ...], str]


@dataclass(frozen=True)
class PauliString:
    """A weighted tensor product of single-site Pauli factors.

    Attributes:
        sites: Strictly increasing site indices the string acts on.
        letters: One of ``X``/``Y``/``Z`` per entry of ``sites``.  The
            identity is the empty string on no sites.
        coefficient: Complex weight.
    """

    sites: tuple[int, ...]
    letters: str
    coefficient: complex = 1.0

    def __post_init__(self) -> None:
        sites = tuple(int(s) for s in self.sites)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        if len(sites) != len(self.letters):
            raise ValueError("sites and letters must have equal length")
        if any(b <= a for a, b in zip(sites, sites[1:])):
            raise ValueError("sites must be strictly increasing")
        if sites and min(sites) < 0:
            raise ValueError("site indices must be non-negative")
        if not _LETTERS.issuperset(self.letters):
            raise ValueError("letters must be drawn from X, Y, Z")

    @property
    def weight(self) -> int:
        """Number of non-identity factors."""
        return len(self.sites)

    def key(self) -> Key:
        return (self.sites, self.letters)


def _merge(
    sa: tuple[int, ...], la: str, sb: tuple[int, ...], lb: str
) -> tuple[tuple[int, ...], str, complex, int]:
    """Merge two strings site-wise.

    Returns the product's sites, letters, accumulated phase, and the number
    of sites where the factors differ (the strings commute iff that count
    is even).
    """
    i = j = 0
    sites: list[int] = []
    letters: list[str] = []
    phase: complex = 1.0
    n_anti = 0
    na, nb = len(sa), len(sb)
    while i < na and j < nb:
        if sa[i] < sb[j]:
            sites.append(sa[i])
            letters.append(la[i])
            i += 1
        elif sa[i] > sb[j]:
            sites.append(sb[j])
            letters.append(lb[j])
            j += 1
        else:
            pa, pb = la[i], lb[j]
            if pa == pb:
                pass  # squares to identity
            else:
                ph, r = _MUL[(pa, pb)]
                phase *= ph
                n_anti += 1
                sites.append(sa[i])
                letters.append(r)
            i += 1
            j += 1
    if i < na:
        sites.extend(sa[i:])
        letters.extend(la[i:])
    if j < nb:
        sites.extend(sb[j:])
        letters.extend(lb[j:])
    return tuple(sites), "".join(letters), phase, n_anti


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Exact product of two Pauli strings (a single string again)."""
    sites, letters, phase, _ = _merge(a.sites, a.letters, b.sites, b.letters)
    return PauliString(sites, letters, a.coefficient * b.coefficient * phase)


class PauliOperator:
    """A finite sum of Pauli strings over a fixed universe of sites.

    Operators on different universes never combine; this guards the
    sequential-decomposition code against silent dimension mismatches.
    Coefficients below 1e-15 of the largest magnitude are pruned on
    construction.

    Examples:
        >>> op = PauliOperator.from_strings(2, [PauliString((0,), "X"),
        ...                                     PauliString((1,), "Z", 0.5)])
        >>> sorted(op.terms.values())
        [(0.5+0j), (1+0j)]
    """

    __slots__ = ("n_sites", "terms")

    PRUNE_REL = 1e-15

    def __init__(
        self,
        n_sites: int,
        terms: Mapping[Key, complex] | None = None,
        *,
        prune: bool = True,
    ) -> None:
        if n_sites < 0:
            raise ValueError("n_sites must be non-negative")
        self.n_sites = int(n_sites)
        data: dict[Key, complex] = {}
        if terms:
            for (sites, letters), coeff in terms.items():
                c = complex(coeff)
                if c == 0:
                    continue
                if sites and max(sites) >= self.n_sites:
                    raise ValueError(
                        f"site {max(sites)} outside universe of {self.n_sites}"
                    )
                data[(tuple(sites), letters)] = c
        self.terms = data
        if prune and data:
            self._prune_inplace(self.PRUNE_REL)

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, n_sites: int) -> "PauliOperator":
        return cls(n_sites)

    @classmethod
    def identity(cls, n_sites: int, coefficient: complex = 1.0) -> "PauliOperator":
        return cls(n_sites, {((), ""): coefficient})

    @classmethod
    def from_strings(
        cls, n_sites: int, strings: Iterable[PauliString]
    ) -> "PauliOperator":
        data: dict[Key, complex] = {}
        for s in strings:
            k = s.key()
            data[k] = data.get(k, 0.0) + s.coefficient
        return cls(n_sites, data)

    # ------------------------------------------------------------------
    # bookkeeping

    def _prune_inplace(self, rel: float) -> None:
        if not self.terms:
            return
        cut = rel * max(abs(c) for c in self.terms.values())
        self.terms = {k: c for k, c in self.terms.items() if abs(c) > cut}

    def prune(self, rel: float = PRUNE_REL) -> "PauliOperator":
        """Copy with coefficients below ``rel`` of the largest dropped."""
        out = PauliOperator(self.n_sites, self.terms, prune=False)
        out._prune_inplace(rel)
        return out

    def iter_strings(self) -> Iterator[PauliString]:
        for (sites, letters), c in self.terms.items():
            yield PauliString(sites, letters, c)

    def support(self) -> frozenset[int]:
        """Union of all sites any term acts on."""
        out: set[int] = set()
        for sites, _ in self.terms:
            out.update(sites)
        return frozenset(out)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        """True when every coefficient is real within ``tol`` (relative)."""
        if not self.terms:
            return True
        scale = max(abs(c) for c in self.terms.values())
        return all(abs(c.imag) <= tol * max(scale, 1.0) for c in self.terms.values())

    def shifted(self, offset: int) -> "PauliOperator":
        """Operator with every site index cyclically shifted by ``offset``."""
        n = self.n_sites
        data: dict[Key, complex] = {}
        for (sites, letters), c in self.terms.items():
            moved = sorted(((s + offset) % n, l) for s, l in zip(sites, letters))
            key = (tuple(s for s, _ in moved), "".join(l for _, l in moved))
            data[key] = data.get(key, 0.0) + c
        return PauliOperator(n, data, prune=False)

    def one_norm(self) -> float:
        """Sum of coefficient magnitudes (an upper bound on the spectral norm)."""
        return float(sum(abs(c) for c in self.terms.values()))

    # ------------------------------------------------------------------
    # algebra

    def _check_universe(self, other: "PauliOperator") -> None:
        if self.n_sites != other.n_sites:
            raise ValueError(
                f"operators live on different universes "
                f"({self.n_sites} vs {other.n_sites} sites)"
            )

    def __add__(self, other: "PauliOperator") -> "PauliOperator":
        if not isinstance(other, PauliOperator):
            return NotImplemented
        self._check_universe(other)
        data = dict(self.terms)
        for k, c in other.terms.items():
            data[k] = data.get(k, 0.0) + c
        return PauliOperator(self.n_sites, data)

    def __sub__(self, other: "PauliOperator") -> "PauliOperator":
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self + (-1.0) * other

    def __neg__(self) -> "PauliOperator":
        return (-1.0) * self

    def __mul__(self, scalar: complex) -> "PauliOperator":
        if isinstance(scalar, PauliOperator):
            return NotImplemented
        s = complex(scalar)
        return PauliOperator(
            self.n_sites,
            {k: c * s for k, c in self.terms.items()},
            prune=False,
        )

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "PauliOperator":
        return self * (1.0 / complex(scalar))

    def __matmul__(self, other: "PauliOperator") -> "PauliOperator":
        if not isinstance(other, PauliOperator):
            return NotImplemented
        self._check_universe(other)
        data: dict[Key, complex] = {}
        for (sa, la), ca in self.terms.items():
            for (sb, lb), cb in other.terms.items():
                sites, letters, phase, _ = _merge(sa, la, sb, lb)
                k = (sites, letters)
                data[k] = data.get(k, 0.0) + ca * cb * phase
        return PauliOperator(self.n_sites, data)

    def dagger(self) -> "PauliOperator":
        """Hermitian conjugate (Pauli strings are Hermitian, so conjugate
        the coefficients)."""
        return PauliOperator(
            self.n_sites,
            {k: c.conjugate() for k, c in self.terms.items()},
            prune=False,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self.n_sites == other.n_sites and self.terms == other.terms

    def __repr__(self) -> str:
        return f"PauliOperator(n_sites={self.n_sites}, n_terms={len(self.terms)})"


def commutator(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Exact commutator [a, b].

    Uses the fact that two Pauli strings either commute or anticommute:
    each pair contributes either zero or twice its product, so no
    cancellation noise is generated for the vanishing pairs.
    """
    a._check_universe(b)
    data: dict[Key, complex] = {}
    for (sa, la), ca in a.terms.items():
        for (sb, lb), cb in b.terms.items():
            sites, letters, phase, n_anti = _merge(sa, la, sb, lb)
            if n_anti % 2 == 0:
                continue
            k = (sites, letters)
            data[k] = data.get(k, 0.0) + 2.0 * ca * cb * phase
    return PauliOperator(a.n_sites, data)


# ----------------------------------------------------------------------
# dense embedding and norms


def to_dense(op: PauliOperator, n_sites: int | None = None) -> np.ndarray:
    """Dense matrix of the operator on ``n_sites`` spins.

    Site ``i`` corresponds to bit position ``n_sites - 1 - i`` of the basis
    index, i.e. the usual Kronecker ordering site0 x site1 x ...  Each term
    is filled in O(2^n) using bit masks rather than Kronecker products.

    Args:
        op: Operator to embed.
        n_sites: Universe size; defaults to ``op.n_sites``.  Limited to 14.

    Raises:
        ValueError: If the requested universe is too large or smaller than
            the operator's own.
    """
    n = op.n_sites if n_sites is None else int(n_sites)
    if n < op.n_sites and any(
        site >= n for sites, _ in op.terms for site in sites
    ):
        raise ValueError("operator does not fit the requested universe")
    if n > 14:
        raise ValueError("dense embedding limited to 14 sites")
    dim = 1 << n
    mat = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for (sites, letters), coeff in op.terms.items():
        xor_mask = 0
        vals = np.full(dim, coeff, dtype=complex)
        for s, l in zip(sites, letters):
            pos = n - 1 - s
            bit = (cols >> pos) & 1
            if l == "X":
                xor_mask |= 1 << pos
            elif l == "Y":
                xor_mask |= 1 << pos
                vals *= 1j * (1.0 - 2.0 * bit)
            else:  # Z
                vals *= 1.0 - 2.0 * bit
        mat[cols ^ xor_mask, cols] += vals
    return mat


def operator_norm(op: PauliOperator) -> float:
    """Spectral norm, computed densely on the operator's support block.

    The support of typical local terms is a handful of sites, so this stays
    cheap even when the universe is large.  Limited to 12-site supports.
    """
    supp = sorted(op.support())
    if not supp:
        return abs(op.terms.get(((), ""), 0.0))
    if len(supp) > 12:
        raise ValueError("support too large for a dense norm")
    index = {s: i for i, s in enumerate(supp)}
    data: dict[Key, complex] = {}
    for (sites, letters), c in op.terms.items():
        key = (tuple(index[s] for s in sites), letters)
        data[key] = data.get(key, 0.0) + c
    block = to_dense(PauliOperator(len(supp), data, prune=False))
    if op.is_hermitian():
        return float(np.max(np.abs(np.linalg.eigvalsh(block))))
    return float(np.linalg.norm(block, 2))


def extensiveness(op: PauliOperator) -> tuple[int, float]:
    """Locality range and per-site strength of an operator.

    Returns:
        ``(k, j)`` where ``k`` is the largest number of sites any term acts
        on and ``j`` is the maximum over sites of the total coefficient
        magnitude of the terms touching that site.  Identity terms act on no
        site and contribute to neither.
    """
    k = 0
    per_site: dict[int, float] = {}
    for (sites, _), c in op.terms.items():
        k = max(k, len(sites))
        for s in sites:
            per_site[s] = per_site.get(s, 0.0) + abs(c)
    j = max(per_site.values()) if per_site else 0.0
    return k, float(j)


# ----------------------------------------------------------------------
# locality metrics of a driven system


@dataclass(frozen=True)
class LocalityMetrics:
    """Locality data of a periodically driven local Hamiltonian.

    Attributes:
        k: Maximum number of sites any interaction term acts on.
        j: Per-site interaction strength J: bounded by the max over sites
            and times of the summed norms of the terms touching the site.
        lam: 2*k*J, the rate governing the series truncation bounds.
        lam_tilde: 6*k**2*J, the rate governing the filtered-state bounds.
        v0: Time-averaged total driving strength over one period.
        vi: Per-site split of v0; driving supports are assigned to their
            smallest site, so ``sum(vi) == v0`` exactly.
    """

    k: int
    j: float
    lam: float
    lam_tilde: float
    v0: float
    vi: tuple[float, ...] = field(repr=False)

    @property
    def tau(self) -> float:
        """Inverse-rate time scale 1/(8*lam_tilde) used by the heating bound."""
        return 1.0 / (8.0 * self.lam_tilde)

    def n0(self, period: float) -> int:
        """Optimal truncation order floor(1/(16*lam*T)) for period ``T``."""
        if period <= 0.0:
            raise ValueError("period must be positive")
        if self.lam <= 0.0:
            raise ValueError("lam must be positive to define a truncation order")
        return int(np.floor(1.0 / (16.0 * self.lam * period)))


def _support_groups(op: PauliOperator) -> dict[tuple[int, ...], PauliOperator]:
    groups: dict[tuple[int, ...], dict[Key, complex]] = {}
    for (sites, letters), c in op.terms.items():
        groups.setdefault(sites, {})[(sites, letters)] = c
    return {
        s: PauliOperator(op.n_sites, d, prune=False) for s, d in groups.items()
    }


def locality_metrics(system, t_samples: int = 16) -> LocalityMetrics:
    """Locality metrics of a :class:`~fml.system.DrivenSystem`.

    The static part is grouped by exact support and measured with dense
    spectral norms.  For the driving, each Pauli string carries a piecewise
    polynomial q(t); supremum and time average of |q| are computed exactly
    (stationary points and sign-change splitting).  Supports that carry a
    single string are therefore exact; multi-string supports use the
    summed-envelope upper bound, which keeps J and V0 on the safe side of
    every truncation bound.  Identity components (empty support) are global
    phases and are excluded.

    Args:
        system: Driven system (static part, driving, period, geometry).
        t_samples: Sampling density used only for an internal consistency
            check of the envelope against pointwise norms.

    Returns:
        The populated :class:`LocalityMetrics`.
    """
    period = system.period
    n = system.n_sites

    # --- static part, grouped by exact support
    static_norm: dict[tuple[int, ...], float] = {}
    k = 0
    for sites, group in _support_groups(system.static).items():
        if not sites:
            continue
        static_norm[sites] = operator_norm(group)
        k = max(k, len(sites))

    # --- driving: per-string piecewise scalar polynomials
    # string key -> list of (t0, t1, coeff vector)
    per_string: dict[Key, list[tuple[float, float, np.ndarray]]] = {}
    for seg in system.driving.segments:
        by_key: dict[Key, np.ndarray] = {}
        for power, payload in enumerate(seg.coeffs):
            for key, c in payload.terms.items():
                if not key[0]:
                    continue  # global phase
                vec = by_key.setdefault(key, np.zeros(len(seg.coeffs), dtype=complex))
                vec[power] = c
        for key, vec in by_key.items():
            if np.max(np.abs(vec.imag)) > 1e-12 * max(1.0, np.max(np.abs(vec))):
                raise ValueError("driving coefficients must be Hermitian")
            per_string.setdefault(key, []).append((seg.t0, seg.t1, vec.real))

    sup_by_string: dict[Key, float] = {}
    avg_by_string: dict[Key, float] = {}
    for key, pieces in per_string.items():
        sup = 0.0
        integral = 0.0
        for t0, t1, vec in pieces:
            sup = max(sup, poly_abs_max(vec, t0, t1))
            integral += poly_abs_integral(vec, t0, t1)
        sup_by_string[key] = sup
        avg_by_string[key] = integral / period

    # --- group driving strings by support
    drive_sup: dict[tuple[int, ...], float] = {}
    drive_avg: dict[tuple[int, ...], float] = {}
    for key in per_string:
        sites = key[0]
        drive_sup[sites] = drive_sup.get(sites, 0.0) + sup_by_string[key]
        drive_avg[sites] = drive_avg.get(sites, 0.0) + avg_by_string[key]
        k = max(k, len(sites))

    # --- assemble J, V0, Vi
    per_site: dict[int, float] = {}
    for sites, norm in static_norm.items():
        for s in sites:
            per_site[s] = per_site.get(s, 0.0) + norm
    for sites, sup in drive_sup.items():
        for s in sites:
            per_site[s] = per_site.get(s, 0.0) + sup
    j = max(per_site.values()) if per_site else 0.0

    v0 = float(sum(drive_avg.values()))
    vi = [0.0] * n
    for sites, avg in drive_avg.items():
        vi[min(sites)] += avg

    lam = 2.0 * k * j
    lam_tilde = 6.0 * k * k * j
    return LocalityMetrics(
        k=k, j=j, lam=lam, lam_tilde=lam_tilde, v0=v0, vi=tuple(vi)
    )
