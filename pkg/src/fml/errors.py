"""Exception types shared across the package.

The command-line runner maps these onto process exit codes: configuration
problems exit 1, integrator non-convergence exits 2, and a rigorous-bound
violation in a verification suite exits 3.
"""

from __future__ import annotations

__all__ = ["BoundViolation", "ConfigError", "ConvergenceError"]


class ConfigError(ValueError):
    """A scenario configuration is malformed or inconsistent."""


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure failed to reach its tolerance."""


class BoundViolation(AssertionError):
    """A rigorous inequality was violated beyond the numerical budget."""
