#!/usr/bin/env python3
"""Quick tour of every rigorous bound the package can check.

One small driven ring, every checker once, a pass/fail line each.  All of
these run as larger randomized batteries in the test suite and in the
`lemma_suite` CLI scenario; this is just the reading copy.
"""

import numpy as np

from fml import (
    PauliOperator,
    PauliString,
    check_corollary1,
    check_lemma3,
    check_lemma4,
    check_lemma5,
    check_lemma6,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    exact_floquet,
    heisenberg_ring,
    lemma1_bound,
    locality_metrics,
    measure_lr_profile,
    omega_series,
    optimal_order_n0,
    truncate,
)

def show(r):
    print(f"  [{r.status:>4s}] {r.name}: lhs={r.lhs:.3e}  rhs={r.rhs:.3e}")


# -- a short-period ring so every hypothesis is satisfied ------------------
# (the absorption bound wants T below tau = 1/(8 lam~) ~ 0.0014 here)
system = heisenberg_ring(6, 0.001, jx=0.9, jy=0.6, jz=0.3, drive=0.8)
metrics = locality_metrics(system)
n0 = optimal_order_n0(metrics, system.period)
print(f"ring(6, T={system.period}): lam*T={metrics.lam * system.period:.4f}  n0={n0}")

series = omega_series(system, max(n0, 6))
u_f = exact_floquet(system)

# term-norm envelope, by hand
print("\nseries envelope, n = 1..6:")
ok = all(
    series.omega_norm(n) <= lemma1_bound(n, metrics) * (1 + 1e-9)
    for n in range(1, 7)
)
print(f"  [{'pass' if ok else 'FAIL'}] ||Omega_n|| <= 2 V0 lam^n n!/(n+1)^2")

# stroboscopic tracking of the optimum-order effective Hamiltonian
print("\npropagator tracking, m = 1..20:")
for r in check_theorem1(system, series, 20, u_f=u_f)[:3]:
    show(r)
print("  ... (first three periods shown)")

# ditto, with the quasi-conservation tail at lower order
print("\ntruncation tail at n <= n0:")
show(check_corollary1(system, series, min(2, n0), u_f=u_f))

# local observables: measured light cone + packaged rhs per period count
print("\nlocal-observable version on sites {0}:")
times = [m * system.period for m in range(1, 11)]
profile = measure_lr_profile(system, times, site=0, u_f=u_f)
for r in check_theorem2(system, series, (0,), 10, profile=profile, u_f=u_f)[:3]:
    show(r)
print("  ... (first three periods shown)")

# energy absorption from a filtered start
print("\nabsorption from the bottom of the order-0 spectrum:")
h0 = truncate(series, 0).operator
psi0 = np.linalg.eigh(h0)[1][:, 0].astype(complex)
width = float(np.ptp(np.linalg.eigvalsh(h0)))
e0 = float(np.linalg.eigvalsh(h0)[0])
for r in check_theorem3(system, series, 0, psi0, e0 + 1e-9,
                        [0.2 * width, 0.4 * width], 10, u_f=u_f):
    show(r)

# commutator-counting lemmas on a handcrafted chain of local operators
# (adjacent links share one site and disagree there, so nothing vanishes)
print("\ncombinatorial commutator bounds:")
def one(sites, letters, c=1.0):
    return PauliOperator.from_strings(6, [PauliString(sites, letters, c)])

ops = [one((0, 1), "XY", 0.7), one((1, 2), "ZX", -0.5),
       one((2, 3), "YZ", 0.9), one((3, 4), "XX", 0.4)]
show(check_lemma3(ops, one((0,), "Z", 1.3)))
show(check_lemma4(ops[0] + ops[1], one((1, 2), "XY", 0.8)))
show(check_lemma5(ops))
# the similarity-growth bound only clears the spectral floor of A for
# operators wide enough that n_a >= 3; narrow A comes back not-applicable
show(check_lemma6(series, one((0, 1, 2, 3, 4, 5), "ZZXXYZ", 0.6),
                  metrics.tau, metrics))
