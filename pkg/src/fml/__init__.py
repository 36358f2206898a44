"""Numerical laboratory for high-order effective Hamiltonians of
periodically driven spin systems and the rigorous error bounds that govern
them: series generation to high order, exact few-body propagators, the
site-by-site decomposition of the period propagator, heating and
light-cone diagnostics, and reproducible experiment runners.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    EnergyFilter,
    LRProfile,
    absorption_probability,
    check_corollary1,
    check_lemma3,
    check_lemma4,
    check_lemma5,
    check_lemma6,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    measure_lr_profile,
)
from .decomposition import (
    DecompositionResult,
    interaction_unitaries,
    lemma2_check,
    split_driving,
    truncated_unitaries,
)
from .errors import BoundViolation, ConfigError, ConvergenceError
from .magnus import (
    MagnusSeries,
    TruncatedHamiltonian,
    lemma1_bound,
    omega_direct,
    omega_series,
    optimal_order_n0,
    truncate,
    w_tilde,
)
from .pauli_algebra import (
    LocalityMetrics,
    PauliOperator,
    PauliString,
    commutator,
    extensiveness,
    locality_metrics,
    multiply,
    operator_norm,
    to_dense,
)
from .propagator import (
    UnitaryResult,
    evolve,
    exact_floquet,
    expm_hermitian,
    ordered_exp,
    partial_trace,
    spectral_norm,
    trace_norm,
)
from .system import DrivenSystem, chain_bonds, heisenberg_ring, ring_bonds
from .time_poly import (
    PiecewisePolyOperator,
    TimePolyOperator,
    evaluate,
    integrate,
    poly_commutator,
)

__all__ = [
    "BoundReport",
    "BoundViolation",
    "ConfigError",
    "ConvergenceError",
    "DecompositionResult",
    "DrivenSystem",
    "EnergyFilter",
    "LRProfile",
    "LocalityMetrics",
    "MagnusSeries",
    "PauliOperator",
    "PauliString",
    "PiecewisePolyOperator",
    "TimePolyOperator",
    "TruncatedHamiltonian",
    "UnitaryResult",
    "absorption_probability",
    "chain_bonds",
    "check_corollary1",
    "check_lemma3",
    "check_lemma4",
    "check_lemma5",
    "check_lemma6",
    "check_theorem1",
    "check_theorem2",
    "check_theorem3",
    "commutator",
    "evaluate",
    "evolve",
    "exact_floquet",
    "expm_hermitian",
    "extensiveness",
    "heisenberg_ring",
    "integrate",
    "interaction_unitaries",
    "lemma1_bound",
    "lemma2_check",
    "locality_metrics",
    "measure_lr_profile",
    "multiply",
    "omega_direct",
    "omega_series",
    "operator_norm",
    "optimal_order_n0",
    "ordered_exp",
    "partial_trace",
    "poly_commutator",
    "ring_bonds",
    "spectral_norm",
    "split_driving",
    "to_dense",
    "trace_norm",
    "truncate",
    "truncated_unitaries",
    "w_tilde",
]
