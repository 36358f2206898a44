"""Exact extrema and absolute-value integrals of scalar real polynomials.

Internal helpers shared by the locality-metric computation and the
piecewise-polynomial driving envelopes.  Coefficient vectors are in
ascending-power order, as used by ``numpy.polynomial.polynomial``.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as npoly

__all__ = [
    "poly_abs_integral",
    "poly_abs_max",
    "poly_eval",
    "poly_real_roots",
]


def poly_eval(coeffs: np.ndarray, t: float | np.ndarray) -> float | np.ndarray:
    """Evaluate a polynomial with ascending-power coefficients at ``t``."""
    return npoly.polyval(t, np.asarray(coeffs, dtype=float))


def _trimmed(coeffs: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1:
        raise ValueError("coefficient vector must be one-dimensional")
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.zeros(1)
    return npoly.polytrim(c, tol=1e-300)


def poly_real_roots(coeffs: np.ndarray, a: float, b: float) -> list[float]:
    """Real roots of the polynomial inside ``[a, b]``, sorted, deduplicated.

    Roots are found from the companion matrix; imaginary parts below a
    relative tolerance are treated as numerical noise.
    """
    c = _trimmed(coeffs)
    if c.size <= 1:
        return []  # constants have no isolated roots worth reporting
    roots = npoly.polyroots(c)
    out: list[float] = []
    margin = 1e-12 * (abs(b - a) + 1.0)
    for r in roots:
        if abs(r.imag) > 1e-8 * (1.0 + abs(r.real)):
            continue
        x = float(np.clip(r.real, a, b))
        if r.real < a - margin or r.real > b + margin:
            continue
        if not any(abs(x - y) <= margin for y in out):
            out.append(x)
    out.sort()
    return out


def poly_abs_max(coeffs: np.ndarray, a: float, b: float) -> float:
    """Exact ``max_{t in [a,b]} |q(t)|`` via stationary points and endpoints."""
    if b < a:
        raise ValueError("empty interval")
    c = _trimmed(coeffs)
    candidates = [a, b]
    if c.size > 1:
        candidates.extend(poly_real_roots(npoly.polyder(c), a, b))
    vals = np.abs(npoly.polyval(np.asarray(candidates), c))
    return float(np.max(vals))


def poly_abs_integral(coeffs: np.ndarray, a: float, b: float) -> float:
    """Exact ``integral_a^b |q(t)| dt`` by splitting at the sign changes of q."""
    if b < a:
        raise ValueError("empty interval")
    if b == a:
        return 0.0
    c = _trimmed(coeffs)
    breaks = [a] + poly_real_roots(c, a, b) + [b]
    anti = npoly.polyint(c)
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi <= lo:
            continue
        piece = npoly.polyval(hi, anti) - npoly.polyval(lo, anti)
        total += abs(float(piece))
    return total
