"""Operator-valued polynomials of time on an interval, and piecewise sums.

A ``TimePolyOperator`` represents A(t) = sum_j t**(offset+j) * coeffs[j] on a
half-open interval (t0, t1]; the value at t0 is served as the continuous
extension, which is what every integral in the package needs.  Payload
coefficients are either :class:`~fml.pauli_algebra.PauliOperator` instances
or complex ndarrays whose last two axes are the matrix (leading axes, when
present, enumerate symmetry blocks and broadcast through every operation).

The ``offset`` field stores a known factor t**offset without materialising
zero payloads.  The recursion that generates the periodic-drive effective
Hamiltonian produces polynomials whose minimum degree grows linearly with
the expansion order; keeping the offset implicit roughly halves both memory
and arithmetic at high order, which is what makes order ~25 on eight spins
fit in a few GB.

Piecewise polynomials (``PiecewisePolyOperator``) carry contiguous segments
covering (0, T] and support the same evaluate/add/commutator/integrate
operations; commutators refine both operands to a common breakpoint grid
first (a polynomial restricted to a subinterval keeps its coefficients).
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from .pauli_algebra import PauliOperator, commutator as _pauli_commutator

__all__ = [
    "PiecewisePolyOperator",
    "TimePolyOperator",
    "evaluate",
    "integrate",
    "poly_commutator",
]

_DOMAIN_SLACK = 1e-12


# ----------------------------------------------------------------------
# payload dispatch


def payload_is_zero(p) -> bool:
    if isinstance(p, PauliOperator):
        return not p.terms
    return not np.any(p)


def payload_zero_like(p):
    if isinstance(p, PauliOperator):
        return PauliOperator.zero(p.n_sites)
    return np.zeros_like(p)


def payload_commutator(x, y):
    if isinstance(x, PauliOperator):
        return _pauli_commutator(x, y)
    return x @ y - y @ x


def payload_dagger(p):
    if isinstance(p, PauliOperator):
        return p.dagger()
    return np.conj(np.swapaxes(p, -1, -2))


def payload_norm(p) -> float:
    """Spectral norm; for block stacks, the maximum over blocks."""
    if isinstance(p, PauliOperator):
        from .pauli_algebra import operator_norm

        return operator_norm(p)
    a = np.asarray(p)
    if a.ndim == 2:
        return float(np.linalg.norm(a, 2))
    flat = a.reshape(-1, a.shape[-2], a.shape[-1])
    return float(max(np.linalg.norm(m, 2) for m in flat))


# ----------------------------------------------------------------------


class TimePolyOperator:
    """Operator-valued polynomial A(t) = sum_j t**(offset+j) coeffs[j].

    Attributes:
        coeffs: Payload coefficients, ascending powers starting at ``offset``.
        offset: Minimum power of t carried by the polynomial.
        t0, t1: Domain interval (t0, t1]; evaluation at t0 returns the
            continuous extension.

    Examples:
        >>> import numpy as np
        >>> b = np.array([[0.0, 1.0], [1.0, 0.0]])
        >>> p = TimePolyOperator([0.0 * b, b], t1=1.0)   # A(t) = t*B
        >>> np.allclose(p.evaluate(0.5), 0.5 * b)
        True
    """

    __slots__ = ("coeffs", "offset", "t0", "t1")

    def __init__(
        self,
        coeffs: Sequence,
        t1: float,
        t0: float = 0.0,
        offset: int = 0,
    ) -> None:
        if not len(coeffs):
            raise ValueError("need at least one coefficient")
        if offset < 0:
            raise ValueError("offset must be non-negative")
        if not (0.0 <= t0 < t1):
            raise ValueError("domain must satisfy 0 <= t0 < t1")
        self.coeffs = list(coeffs)
        self.offset = int(offset)
        self.t0 = float(t0)
        self.t1 = float(t1)

    # -- bookkeeping ----------------------------------------------------

    @property
    def domain(self) -> tuple[float, float]:
        return (self.t0, self.t1)

    @property
    def degree(self) -> int:
        return self.offset + len(self.coeffs) - 1

    def trimmed(self) -> "TimePolyOperator":
        """Drop exactly-zero leading/trailing payloads, adjusting the offset."""
        lo = 0
        hi = len(self.coeffs)
        while lo < hi - 1 and payload_is_zero(self.coeffs[lo]):
            lo += 1
        while hi > lo + 1 and payload_is_zero(self.coeffs[hi - 1]):
            hi -= 1
        if lo == 0 and hi == len(self.coeffs):
            return self
        return TimePolyOperator(
            self.coeffs[lo:hi], self.t1, self.t0, self.offset + lo
        )

    def with_domain(self, t0: float, t1: float) -> "TimePolyOperator":
        return TimePolyOperator(self.coeffs, t1, t0, self.offset)

    def map_payloads(self, fn: Callable) -> "TimePolyOperator":
        return TimePolyOperator(
            [fn(c) for c in self.coeffs], self.t1, self.t0, self.offset
        )

    # -- algebra ---------------------------------------------------------

    def evaluate(self, t: float):
        """Value at ``t`` (must lie in [t0, t1] up to a 1e-12 slack)."""
        if t < self.t0 - _DOMAIN_SLACK or t > self.t1 + _DOMAIN_SLACK:
            raise ValueError(f"t={t} outside the domain ({self.t0}, {self.t1}]")
        t = float(t)
        val = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            val = c + val * t
        if self.offset:
            val = val * (t ** self.offset)
        return val

    def __add__(self, other: "TimePolyOperator") -> "TimePolyOperator":
        if not isinstance(other, TimePolyOperator):
            return NotImplemented
        off = min(self.offset, other.offset)
        n = max(self.offset + len(self.coeffs), other.offset + len(other.coeffs))
        out: list = [None] * (n - off)
        for poly in (self, other):
            base = poly.offset - off
            for j, c in enumerate(poly.coeffs):
                k = base + j
                out[k] = c if out[k] is None else out[k] + c
        zero = payload_zero_like(self.coeffs[0])
        out = [zero if c is None else c for c in out]
        return TimePolyOperator(out, self.t1, self.t0, off)

    def __mul__(self, scalar: complex) -> "TimePolyOperator":
        return TimePolyOperator(
            [c * scalar for c in self.coeffs], self.t1, self.t0, self.offset
        )

    __rmul__ = __mul__

    def __neg__(self) -> "TimePolyOperator":
        return self * (-1.0)

    def __sub__(self, other: "TimePolyOperator") -> "TimePolyOperator":
        return self + (-1.0) * other

    def commutator(self, other: "TimePolyOperator") -> "TimePolyOperator":
        """[A(t), B(t)] as a polynomial; degrees and offsets add."""
        p, q = len(self.coeffs), len(other.coeffs)
        out: list = [None] * (p + q - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                c = payload_commutator(a, b)
                k = i + j
                out[k] = c if out[k] is None else out[k] + c
        return TimePolyOperator(
            out, self.t1, self.t0, self.offset + other.offset
        )

    def antiderivative(self) -> "TimePolyOperator":
        """Term-wise antiderivative with zero constant (vanishes at t=0)."""
        out = [c * (1.0 / (self.offset + j + 1)) for j, c in enumerate(self.coeffs)]
        return TimePolyOperator(out, self.t1, self.t0, self.offset + 1)

    def definite_integral(self, a: float, b: float):
        anti = self.antiderivative()
        return anti.evaluate(b) - anti.evaluate(a)


# ----------------------------------------------------------------------


class PiecewisePolyOperator:
    """Contiguous polynomial segments covering (0, T]."""

    __slots__ = ("segments",)

    def __init__(self, segments: Iterable[TimePolyOperator]) -> None:
        segs = tuple(segments)
        if not segs:
            raise ValueError("need at least one segment")
        if abs(segs[0].t0) > _DOMAIN_SLACK:
            raise ValueError("first segment must start at t=0")
        for a, b in zip(segs, segs[1:]):
            if abs(a.t1 - b.t0) > _DOMAIN_SLACK:
                raise ValueError("segments must be contiguous")
        self.segments = segs

    @classmethod
    def single(
        cls, coeffs: Sequence, period: float, offset: int = 0
    ) -> "PiecewisePolyOperator":
        return cls([TimePolyOperator(coeffs, period, 0.0, offset)])

    @property
    def period(self) -> float:
        return self.segments[-1].t1

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (0.0,) + tuple(s.t1 for s in self.segments)

    def map_payloads(self, fn: Callable) -> "PiecewisePolyOperator":
        return PiecewisePolyOperator([s.map_payloads(fn) for s in self.segments])

    def trimmed(self) -> "PiecewisePolyOperator":
        return PiecewisePolyOperator([s.trimmed() for s in self.segments])

    def _segment_at(self, t: float) -> TimePolyOperator:
        if t < -_DOMAIN_SLACK or t > self.period + _DOMAIN_SLACK:
            raise ValueError(f"t={t} outside the domain (0, {self.period}]")
        for seg in self.segments:
            if t <= seg.t1 + _DOMAIN_SLACK:
                return seg
        return self.segments[-1]

    def evaluate(self, t: float):
        return self._segment_at(t).evaluate(t)

    def _refined(self, other: "PiecewisePolyOperator") -> tuple[list, list]:
        """Restrict both operands to the merged breakpoint grid."""
        cuts = sorted(set(self.breakpoints) | set(other.breakpoints))
        merged: list[float] = []
        for c in cuts:
            if not merged or c - merged[-1] > _DOMAIN_SLACK:
                merged.append(c)
        mine, theirs = [], []
        for a, b in zip(merged[:-1], merged[1:]):
            mid = 0.5 * (a + b)
            mine.append(self._segment_at(mid).with_domain(a, b))
            theirs.append(other._segment_at(mid).with_domain(a, b))
        return mine, theirs

    def _binary(self, other, op) -> "PiecewisePolyOperator":
        if not isinstance(other, PiecewisePolyOperator):
            return NotImplemented
        if abs(self.period - other.period) > _DOMAIN_SLACK:
            raise ValueError("operands cover different periods")
        mine, theirs = self._refined(other)
        return PiecewisePolyOperator([op(a, b) for a, b in zip(mine, theirs)])

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __mul__(self, scalar: complex) -> "PiecewisePolyOperator":
        return PiecewisePolyOperator([s * scalar for s in self.segments])

    __rmul__ = __mul__

    def commutator(self, other: "PiecewisePolyOperator") -> "PiecewisePolyOperator":
        return self._binary(other, lambda a, b: a.commutator(b))

    def integrate(self) -> "PiecewisePolyOperator":
        """Cumulative integral from 0: G(t) = integral_0^t A(s) ds.

        On a single segment starting at zero the offset structure is kept
        intact; across segments the running constant is folded into the
        degree-zero coefficient.
        """
        out: list[TimePolyOperator] = []
        running = None  # payload constant accumulated at segment starts
        for seg in self.segments:
            anti = seg.antiderivative()
            if running is None and abs(seg.t0) <= _DOMAIN_SLACK:
                out.append(anti)
                running = anti.evaluate(seg.t1)
                continue
            start_val = anti.evaluate(seg.t0)
            const = (running - start_val) if running is not None else -start_val
            # fold the constant into an offset-0 representation
            coeffs = [payload_zero_like(const) for _ in range(anti.offset)]
            coeffs.extend(anti.coeffs)
            coeffs[0] = coeffs[0] + const
            merged = TimePolyOperator(coeffs, seg.t1, seg.t0, 0)
            out.append(merged)
            running = merged.evaluate(seg.t1)
        return PiecewisePolyOperator(out)

    def definite_integral(self, a: float = 0.0, b: float | None = None):
        """integral_a^b A(t) dt across segment boundaries."""
        if b is None:
            b = self.period
        if b < a - _DOMAIN_SLACK:
            raise ValueError("reversed integration range")
        total = None
        for seg in self.segments:
            lo = max(a, seg.t0)
            hi = min(b, seg.t1)
            if hi <= lo + 0.0:
                continue
            piece = seg.definite_integral(lo, hi)
            total = piece if total is None else total + piece
        if total is None:
            mid = self._segment_at(a)
            total = payload_zero_like(mid.coeffs[0])
        return total


# ----------------------------------------------------------------------
# functional forms


def poly_commutator(a, b):
    """Commutator of two (piecewise) operator polynomials."""
    if isinstance(a, PiecewisePolyOperator):
        return a.commutator(b)
    return a.commutator(b)


def integrate(a):
    """Cumulative integral from zero of a (piecewise) operator polynomial."""
    if isinstance(a, PiecewisePolyOperator):
        return a.integrate()
    anti = a.antiderivative()
    if abs(a.t0) > _DOMAIN_SLACK:
        raise ValueError("single-segment integration must start at t=0")
    return anti


def evaluate(a, t: float):
    """Value of a (piecewise) operator polynomial at time ``t``."""
    return a.evaluate(t)
