"""Symmetry-adapted bases: cyclic translation sectors and Z-parity blocks.

Dense linear algebra dominates the cost of the high-order series generator
and of the sequential decomposition.  When the model commutes with the
cyclic site shift, every dense payload block-diagonalises in the momentum
(necklace) basis: 2**n dimensions fall apart into n sectors of roughly
2**n/n states each, which cuts matrix-product work by about n**2.  When
every term commutes with the global Z-parity, operators split into an
even and an odd block of 2**(n-1) states.  Both transforms are exact; the
off-block residual of a transformed matrix is available as a diagnostic.

The basis conventions match :func:`fml.pauli_algebra.to_dense`: site i is
bit position n-1-i, so the shift site i -> i+1 (mod n) is a right rotation
of the n-bit string.
"""

from __future__ import annotations

import numpy as np

from .pauli_algebra import PauliOperator, to_dense

__all__ = [
    "ParityBlocks",
    "TranslationBasis",
    "detect_translation",
    "detect_zparity",
    "translation_permutation",
]


def translation_permutation(n_sites: int) -> np.ndarray:
    """Index map tau with tau[j] = basis state of the shifted configuration."""
    n = int(n_sites)
    j = np.arange(1 << n)
    return (j >> 1) | ((j & 1) << (n - 1))


def _pauli_shift_invariant(op: PauliOperator, tol: float) -> bool:
    diff = op - op.shifted(1)
    scale = max((abs(c) for c in op.terms.values()), default=0.0)
    return diff.one_norm() <= tol * max(scale, 1.0)


def detect_translation(system, tol: float = 1e-12) -> bool:
    """True when the static part and every driving coefficient are invariant
    under the cyclic site shift (checked exactly at the Pauli-term level)."""
    if not _pauli_shift_invariant(system.static, tol):
        return False
    for seg in system.driving.segments:
        for payload in seg.coeffs:
            if not _pauli_shift_invariant(payload, tol):
                return False
    return True


def detect_zparity(system, tol: float = 1e-12) -> bool:
    """True when every Pauli term flips an even number of spins (commutes
    with the global Z-parity)."""

    def ok(op: PauliOperator) -> bool:
        scale = max((abs(c) for c in op.terms.values()), default=0.0)
        for (sites, letters), c in op.terms.items():
            if abs(c) <= tol * max(scale, 1.0):
                continue
            if sum(1 for l in letters if l in "XY") % 2:
                return False
        return True

    if not ok(system.static):
        return False
    return all(ok(p) for seg in system.driving.segments for p in seg.coeffs)


class TranslationBasis:
    """Momentum-sector orthonormal basis of a translation-invariant ring.

    Attributes:
        n_sites: Ring length n.
        q: Dense unitary whose columns are the sector states, grouped by
            momentum index k = 0..n-1.
        sectors: List of (k, column slice) pairs.
        block_dims: Dimension of each sector.
        d_max: Largest sector dimension (blocks are zero-padded to this).
    """

    def __init__(self, n_sites: int) -> None:
        n = int(n_sites)
        dim = 1 << n
        tau = translation_permutation(n)

        # orbits of the shift on basis states
        seen = np.zeros(dim, dtype=bool)
        orbits: list[list[int]] = []
        for s in range(dim):
            if seen[s]:
                continue
            orbit = [s]
            seen[s] = True
            t = int(tau[s])
            while t != s:
                seen[t] = True
                orbit.append(t)
                t = int(tau[t])
            orbits.append(orbit)

        cols: list[np.ndarray] = []
        sectors: list[tuple[int, slice]] = []
        start = 0
        for k in range(n):
            count = 0
            for orbit in orbits:
                length = len(orbit)
                if (k * length) % n:
                    continue  # momentum not supported on this orbit
                vec = np.zeros(dim, dtype=complex)
                phase = np.exp(-2j * np.pi * k / n)
                amp = 1.0 / np.sqrt(length)
                for r, state in enumerate(orbit):
                    vec[state] += amp * phase**r
                cols.append(vec)
                count += 1
            sectors.append((k, slice(start, start + count)))
            start += count
        assert start == dim

        self.n_sites = n
        self.q = np.column_stack(cols)
        self.sectors = sectors
        self.block_dims = tuple(s.stop - s.start for _, s in sectors)
        self.d_max = max(self.block_dims)

    # ------------------------------------------------------------------

    def rotate(self, mat: np.ndarray) -> np.ndarray:
        """Q^dagger M Q."""
        return self.q.conj().T @ mat @ self.q

    def to_blocks(self, mat: np.ndarray) -> np.ndarray:
        """Padded sector blocks, shape (n, d_max, d_max)."""
        rot = self.rotate(mat)
        out = np.zeros((len(self.sectors), self.d_max, self.d_max), dtype=complex)
        for b, (_, sl) in enumerate(self.sectors):
            d = sl.stop - sl.start
            out[b, :d, :d] = rot[sl, sl]
        return out

    def from_blocks(self, blocks: np.ndarray) -> np.ndarray:
        dim = self.q.shape[0]
        rot = np.zeros((dim, dim), dtype=complex)
        for b, (_, sl) in enumerate(self.sectors):
            d = sl.stop - sl.start
            rot[sl, sl] = blocks[b, :d, :d]
        return self.q @ rot @ self.q.conj().T

    def off_block_residual(self, mat: np.ndarray) -> float:
        """Spectral norm of the part of Q^dagger M Q outside the blocks."""
        rot = self.rotate(mat)
        for _, sl in self.sectors:
            rot[sl, sl] = 0.0
        return float(np.linalg.norm(rot, 2))


class ParityBlocks:
    """Even/odd global-Z-parity blocks (spin-flip count parity)."""

    def __init__(self, n_sites: int) -> None:
        n = int(n_sites)
        if n < 1:
            raise ValueError("need at least one site")
        j = np.arange(1 << n)
        pop = np.zeros(1 << n, dtype=int)
        for b in range(n):
            pop += (j >> b) & 1
        self.n_sites = n
        self.idx_even = np.where(pop % 2 == 0)[0]
        self.idx_odd = np.where(pop % 2 == 1)[0]
        self.d = 1 << (n - 1)

    def to_blocks(self, mat: np.ndarray) -> np.ndarray:
        """Shape (2, 2**(n-1), 2**(n-1)): even then odd sector."""
        return np.stack(
            [
                mat[np.ix_(self.idx_even, self.idx_even)],
                mat[np.ix_(self.idx_odd, self.idx_odd)],
            ]
        )

    def from_blocks(self, blocks: np.ndarray) -> np.ndarray:
        dim = 1 << self.n_sites
        out = np.zeros((dim, dim), dtype=complex)
        out[np.ix_(self.idx_even, self.idx_even)] = blocks[0]
        out[np.ix_(self.idx_odd, self.idx_odd)] = blocks[1]
        return out

    def off_block_residual(self, mat: np.ndarray) -> float:
        even_odd = mat[np.ix_(self.idx_even, self.idx_odd)]
        odd_even = mat[np.ix_(self.idx_odd, self.idx_even)]
        return float(
            max(np.linalg.norm(even_odd, 2), np.linalg.norm(odd_even, 2))
        )
