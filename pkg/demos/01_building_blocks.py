#!/usr/bin/env python3
"""Warm-up tour of the operator layer.

Builds a few Pauli strings by hand, multiplies and commutes them, checks
the answers against dense matrices, and finishes with the locality metrics
of the standard driven ring (the numbers every bound in the package is
built from).
"""

import numpy as np

from fml import (
    PauliOperator,
    PauliString,
    commutator,
    heisenberg_ring,
    locality_metrics,
    multiply,
    operator_norm,
    to_dense,
)

# ---------------------------------------------------------------- strings

# A Pauli string is (sites, letters, coefficient).  Sites are kept sorted,
# the identity is the empty string.
x0 = PauliString((0,), "X", 1.0)
z0 = PauliString((0,), "Z", 1.0)
zz = PauliString((0, 1), "ZZ", 0.25)

print("x0 * z0       =", multiply(x0, z0))          # -> -i Y0
print("x0 * x0       =", multiply(x0, x0))          # -> identity
print("zz * x0       =", multiply(zz, x0))

# ---------------------------------------------------------------- operators

# Operators are coefficient maps over strings; arithmetic stays exact
# (python complex) until you ask for a dense matrix.
a = PauliOperator.from_strings(2, [x0, zz])
b = PauliOperator.from_strings(2, [z0])
c = commutator(a, b)
print("\n[a, b] terms:")
for (sites, letters), coeff in sorted(c.terms.items()):
    print(f"    {letters} on {sites}: {coeff}")

# cross-check against dense kronecker matrices on 2 sites
ad, bd = to_dense(a, 2), to_dense(b, 2)
cd = ad @ bd - bd @ ad
err = np.max(np.abs(cd - to_dense(c, 2)))
print(f"dense commutator mismatch: {err:.2e}")
assert err < 1e-14

# the 1-norm of coefficients upper-bounds the spectral norm
print(f"coefficient 1-norm of [a,b]: {operator_norm(c):.3f}")
print(f"dense spectral norm:         {np.linalg.norm(to_dense(c, 2), 2):.3f}")

# ---------------------------------------------------------------- locality

# The standard benchmark: XYZ ring with a sinusoidal field on every site.
# J is the largest per-site interaction energy over one period, k the
# largest term support; everything downstream depends only on (k, J, V0).
for period in (0.1, 0.5):
    system = heisenberg_ring(6, period)
    m = locality_metrics(system)
    print(
        f"\nring(6, T={period}): k={m.k}  J={m.j:.3f}  lam={m.lam:.3f}  "
        f"lam~={m.lam_tilde:.3f}  V0={m.v0:.4f}"
    )
    print(f"  lam*T = {m.lam * period:.3f}   (hypotheses want <= 1/4)")
    print(f"  heating time scale tau = {m.tau:.5f}")
