"""High-order effective-Hamiltonian series of a periodically driven system.

The stroboscopic effective Hamiltonian of a period-T drive is expanded as
H_eff = sum_n T**n Omega_n.  The terms are generated by the standard
recursion for the logarithm of a time-ordered exponential: with
A(t) = -i H(t),

    W_1(t) = int_0^t A,
    S_k^(1) = [W_{k-1}, A],   S_k^(j) = sum_{m=1}^{k-j} [W_m, S_{k-m}^(j-1)],
    W_k(t) = sum_{j=1}^{k-1} (B_j / j!) int_0^t S_k^(j),

with Bernoulli numbers B_j (B_1 = -1/2), and the order-n term recovered as
Omega_n = i W_{n+1}(T) / T**(n+1).  All intermediate objects are operator
polynomials in t, so every integral is exact; the only floating-point
content is payload arithmetic.

Backends: ``pauli`` keeps exact Pauli-term payloads (practical to order
~6); ``dense`` uses full matrices; ``dense-momentum`` block-diagonalises
every payload into the cyclic-translation sectors first, which is what
makes order ~25 on eight spins tractable.  ``auto`` picks for you.  Every
payload of the recursion is anti-Hermitian, so the dense commutator needs
a single matrix product: [a, b] = ab - (ab)^dagger.

``omega_direct`` implements the first three orders literally from their
iterated-integral formulas as an independent cross-check; the module-level
bound helpers (``lemma1_bound``, ``optimal_order_n0``, ``w_tilde``) expose
the rigorous growth estimates used by :mod:`fml.bounds`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .pauli_algebra import PauliOperator, commutator, to_dense, LocalityMetrics
from .symmetry import TranslationBasis, detect_translation
from .time_poly import (
    PiecewisePolyOperator,
    TimePolyOperator,
    integrate,
    payload_dagger,
    payload_norm,
    poly_commutator,
)

__all__ = [
    "MagnusSeries",
    "TruncatedHamiltonian",
    "bernoulli_numbers",
    "lemma1_bound",
    "omega_direct",
    "omega_series",
    "optimal_order_n0",
    "truncate",
    "w_tilde",
]

N_MAX_LIMIT = 40


@lru_cache(maxsize=8)
def bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """B_0..B_n as exact fractions, in the convention with B_1 = -1/2."""
    bs = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * bs[j]
        bs.append(-acc / (m + 1))
    return tuple(bs)


# ----------------------------------------------------------------------
# series container


@dataclass
class MagnusSeries:
    """Generated series terms Omega_0..Omega_n of a driven system.

    Attributes:
        period: Driving period T.
        omegas: Payload per order; Pauli operators, dense matrices, or
            translation-sector block stacks depending on the backend.
        backend: "pauli", "dense", or "dense-momentum".
        basis: The sector basis when the momentum backend was used.
        herm_defect: Largest relative Hermiticity deviation of the raw
            terms before symmetrisation (a numerical-quality diagnostic).
        n_sites: Size of the underlying universe.
    """

    period: float
    omegas: list = field(repr=False)
    backend: str
    basis: TranslationBasis | None = None
    herm_defect: float = 0.0
    n_sites: int | None = None

    @property
    def n_max(self) -> int:
        return len(self.omegas) - 1

    def omega(self, n: int):
        """Payload of Omega_n as stored by the backend."""
        return self.omegas[n]

    def omega_dense(self, n: int) -> np.ndarray:
        """Omega_n as a full dense matrix."""
        payload = self.omegas[n]
        if isinstance(payload, PauliOperator):
            return to_dense(payload)
        if self.basis is not None:
            return self.basis.from_blocks(payload)
        return payload

    def omega_norm(self, n: int) -> float:
        """Spectral norm of Omega_n (computed block-wise when possible)."""
        return payload_norm(self.omegas[n])


@dataclass
class TruncatedHamiltonian:
    """Effective Hamiltonian truncated at a given order.

    ``operator`` is the dense sum_{m<=order} T**m Omega_m; ``blocks`` keeps
    the same sum in translation-sector form when the series was generated
    block-wise (exponentials are then much cheaper).
    """

    order: int
    operator: np.ndarray
    period: float
    blocks: np.ndarray | None = None
    basis: TranslationBasis | None = None


def truncate(series: MagnusSeries, n: int) -> TruncatedHamiltonian:
    """Sum the series terms through order ``n``.

    Raises:
        ValueError: If the series holds fewer than ``n`` orders.
    """
    if n < 0 or n > series.n_max:
        raise ValueError(f"order {n} outside the generated range 0..{series.n_max}")
    t_pow = 1.0
    dense_sum = None
    block_sum = None
    for m in range(n + 1):
        dense_term = series.omega_dense(m) * t_pow
        dense_sum = dense_term if dense_sum is None else dense_sum + dense_term
        if series.basis is not None:
            term = series.omegas[m] * t_pow
            block_sum = term if block_sum is None else block_sum + term
        t_pow *= series.period
    return TruncatedHamiltonian(
        order=n,
        operator=dense_sum,
        period=series.period,
        blocks=block_sum,
        basis=series.basis,
    )


# ----------------------------------------------------------------------
# the recursion


def _comm_anti(a: TimePolyOperator, b: TimePolyOperator) -> TimePolyOperator:
    """Polynomial commutator for anti-Hermitian ndarray payloads.

    Uses [x, y] = xy - (xy)^dagger, valid because (xy)^dagger = y^dagger
    x^dagger = yx for anti-Hermitian x, y; halves the matrix products.
    """
    p, q = len(a.coeffs), len(b.coeffs)
    out: list = [None] * (p + q - 1)
    for i, x in enumerate(a.coeffs):
        for j, y in enumerate(b.coeffs):
            prod = np.matmul(x, y)
            c = prod - np.conj(np.swapaxes(prod, -1, -2))
            k = i + j
            if out[k] is None:
                out[k] = c
            else:
                out[k] += c
    return TimePolyOperator(out, a.t1, a.t0, a.offset + b.offset)


def _recursion(a_poly, order_max: int, comm) -> list:
    """Run the generator recursion; returns [W_1(t), ..., W_K(t)]."""
    bern = bernoulli_numbers(order_max)
    weights = [float(b / math.factorial(j)) for j, b in enumerate(bern)]
    omega = {1: integrate(a_poly)}
    s_table: dict[tuple[int, int], object] = {}
    for k in range(2, order_max + 1):
        s_table[(k, 1)] = comm(omega[k - 1], a_poly).trimmed()
        for j in range(2, k):
            acc = None
            for m in range(1, k - j + 1):
                term = comm(omega[m], s_table[(k - m, j - 1)])
                acc = term if acc is None else acc + term
            s_table[(k, j)] = acc.trimmed()
        integrand = None
        for j in range(1, k):
            if weights[j] == 0.0:
                continue
            term = s_table[(k, j)] * weights[j]
            integrand = term if integrand is None else integrand + term
        omega[k] = integrate(integrand)
    return [omega[k] for k in range(1, order_max + 1)]


def _resolve_backend(system, n_max: int, backend: str) -> str:
    if backend == "auto":
        if n_max <= 6:
            return "pauli"
        return "dense-momentum" if detect_translation(system) else "dense"
    if backend not in ("pauli", "dense", "dense-momentum"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "dense-momentum" and not detect_translation(system):
        raise ValueError("momentum backend needs a translation-invariant system")
    return backend


def omega_series(
    system,
    n_max: int,
    *,
    backend: str = "auto",
    hermitize: bool = True,
) -> MagnusSeries:
    """Generate the series terms Omega_0..Omega_{n_max}.

    Args:
        system: The driven system.
        n_max: Highest order to generate (<= 40).
        backend: "pauli" (exact term algebra), "dense", "dense-momentum",
            or "auto".
        hermitize: Symmetrise each term and record the pre-symmetrisation
            deviation in ``herm_defect`` (the raw terms are Hermitian up to
            integrator-free float noise only).

    Returns:
        A :class:`MagnusSeries`.

    Raises:
        ValueError: For out-of-range orders or an inapplicable backend.
    """
    if not 0 <= n_max <= N_MAX_LIMIT:
        raise ValueError(f"n_max must lie in 0..{N_MAX_LIMIT}")
    chosen = _resolve_backend(system, n_max, backend)
    period = system.period

    basis: TranslationBasis | None = None
    if chosen == "pauli":
        poly = system.hamiltonian_poly().map_payloads(lambda op: op * (-1j))
        comm = poly_commutator
    elif chosen == "dense":
        poly = system.dense_poly().map_payloads(lambda m: -1j * m)
        comm = None
    else:
        basis = TranslationBasis(system.n_sites)
        poly = system.dense_poly(basis.to_blocks).map_payloads(lambda m: -1j * m)
        comm = None

    if len(poly.segments) == 1:
        work = poly.segments[0].trimmed()
        if comm is None:
            comm = _comm_anti
    else:
        work = poly
        if comm is None:
            comm = poly_commutator

    omegas_std = _recursion(work, n_max + 1, comm)

    fm: list = []
    defect = 0.0
    t_pow = period
    for n in range(n_max + 1):
        value = omegas_std[n].evaluate(period) * (1j / t_pow)
        t_pow *= period
        if hermitize:
            adj = payload_dagger(value)
            if isinstance(value, PauliOperator):
                dev = (value - adj).one_norm()
                scale = max(value.one_norm(), 1e-300)
            else:
                dev = float(np.linalg.norm((value - adj).ravel()))
                scale = max(float(np.linalg.norm(value.ravel())), 1e-300)
            defect = max(defect, 0.5 * dev / scale)
            value = (value + adj) * 0.5
        fm.append(value)

    return MagnusSeries(
        period=period,
        omegas=fm,
        backend=chosen,
        basis=basis,
        herm_defect=defect,
        n_sites=system.n_sites,
    )


# ----------------------------------------------------------------------
# literal low orders


class _ScalarPW:
    """Scalar piecewise polynomial on the driving's breakpoint grid."""

    def __init__(self, edges: list[float], polys: list[np.ndarray]) -> None:
        self.edges = edges
        self.polys = [np.atleast_1d(np.asarray(p, dtype=float)) for p in polys]

    @classmethod
    def monomial(cls, edges: list[float], seg: int, power: int) -> "_ScalarPW":
        polys = [np.zeros(1) for _ in range(len(edges) - 1)]
        vec = np.zeros(power + 1)
        vec[power] = 1.0
        polys[seg] = vec
        return cls(edges, polys)

    def product(self, other: "_ScalarPW") -> "_ScalarPW":
        out = [
            np.polynomial.polynomial.polymul(p, q)
            for p, q in zip(self.polys, other.polys)
        ]
        return _ScalarPW(self.edges, out)

    def cumint(self) -> "_ScalarPW":
        out = []
        running = 0.0
        for (t0, t1), p in zip(zip(self.edges[:-1], self.edges[1:]), self.polys):
            anti = np.polynomial.polynomial.polyint(p)
            shift = running - np.polynomial.polynomial.polyval(t0, anti)
            anti = anti.copy()
            anti[0] += shift
            out.append(anti)
            running = np.polynomial.polynomial.polyval(t1, anti)
        return _ScalarPW(self.edges, out)

    def integral(self) -> float:
        total = 0.0
        for (t0, t1), p in zip(zip(self.edges[:-1], self.edges[1:]), self.polys):
            anti = np.polynomial.polynomial.polyint(p)
            total += np.polynomial.polynomial.polyval(
                t1, anti
            ) - np.polynomial.polynomial.polyval(t0, anti)
        return float(total)


def omega_direct(system, n: int) -> PauliOperator:
    """Orders 0..2 evaluated literally from their iterated integrals.

    Omega_0 is the period average of H; Omega_1 carries the ordered double
    integral of [H(t1), H(t2)] with prefactor 1/(2i T**2); Omega_2 carries
    the ordered triple integral of [H(t1),[H(t2),H(t3)]] + [H(t3),[H(t2),
    H(t1)]] with prefactor -1/(6 T**3) (one inverse power of T per nested
    integral, as dimensional consistency requires).  Everything is exact
    Pauli-term algebra with exact polynomial time integrals, which makes
    this a genuinely independent oracle for the recursion generator.

    Raises:
        ValueError: For n outside 0..2.
    """
    if n not in (0, 1, 2):
        raise ValueError("the literal formulas are implemented for n = 0, 1, 2")
    period = system.period
    poly = system.hamiltonian_poly()
    edges = list(poly.breakpoints)

    # H(t) = sum_alpha e_alpha(t) * ops[alpha]
    ops: list[PauliOperator] = []
    mono: list[_ScalarPW] = []
    for s, seg in enumerate(poly.segments):
        for j, payload in enumerate(seg.coeffs):
            if not payload.terms:
                continue
            ops.append(payload)
            mono.append(_ScalarPW.monomial(edges, s, seg.offset + j))

    if n == 0:
        acc = PauliOperator.zero(system.n_sites)
        for op, e in zip(ops, mono):
            acc = acc + op * (e.integral() / period)
        return acc

    cum = [e.cumint() for e in mono]

    if n == 1:
        acc = PauliOperator.zero(system.n_sites)
        for a, (op_a, e_a) in enumerate(zip(ops, mono)):
            for b, op_b in enumerate(ops):
                s2 = e_a.product(cum[b]).integral()
                if s2 == 0.0:
                    continue
                acc = acc + commutator(op_a, op_b) * (s2 / (2j * period**2))
        return acc

    # n == 2
    inner_comms: dict[tuple[int, int], PauliOperator] = {}

    def comm_cached(i: int, j: int) -> PauliOperator:
        if (i, j) not in inner_comms:
            inner_comms[(i, j)] = commutator(ops[i], ops[j])
        return inner_comms[(i, j)]

    acc = PauliOperator.zero(system.n_sites)
    pref = -1.0 / (6.0 * period**3)
    for b in range(len(ops)):
        for g in range(len(ops)):
            inner = mono[b].product(cum[g]).cumint()
            for a in range(len(ops)):
                s3 = mono[a].product(inner).integral()
                if s3 == 0.0:
                    continue
                word = commutator(ops[a], comm_cached(b, g)) + commutator(
                    ops[g], comm_cached(b, a)
                )
                acc = acc + word * (pref * s3)
    return acc


# ----------------------------------------------------------------------
# growth estimates


def lemma1_bound(n: int, metrics: LocalityMetrics, *, as_log10: bool = False):
    """Rigorous norm bound 2 V0 lam**n n! / (n+1)**2 on the order-n term.

    Computed in the log domain; when the value exceeds the double range the
    plain form returns ``inf`` and ``as_log10=True`` returns the exact
    base-10 logarithm instead.

    Raises:
        ValueError: For n < 1 (the zeroth term is not covered).
    """
    if n < 1:
        raise ValueError("the growth bound applies from order 1")
    if metrics.v0 == 0.0 or metrics.lam == 0.0:
        return -math.inf if as_log10 else 0.0
    log10v = (
        math.log10(2.0 * metrics.v0)
        + n * math.log10(metrics.lam)
        + math.lgamma(n + 1) / math.log(10.0)
        - 2.0 * math.log10(n + 1)
    )
    if as_log10:
        return log10v
    return 10.0**log10v if log10v < 306.0 else math.inf


def optimal_order_n0(metrics: LocalityMetrics, period: float) -> int:
    """Truncation order floor(1 / (16 lam T)) minimising the error bound."""
    return metrics.n0(period)


def w_tilde(n: int, metrics: LocalityMetrics, *, as_log10: bool = False):
    """Growth weight 2 (4 lam / 3)**n n! / (n+1)**2 used by the heating bound."""
    if n < 1:
        raise ValueError("the growth weight applies from order 1")
    if metrics.lam == 0.0:
        return -math.inf if as_log10 else 0.0
    log10v = (
        math.log10(2.0)
        + n * math.log10(4.0 * metrics.lam / 3.0)
        + math.lgamma(n + 1) / math.log(10.0)
        - 2.0 * math.log10(n + 1)
    )
    if as_log10:
        return log10v
    return 10.0**log10v if log10v < 306.0 else math.inf
