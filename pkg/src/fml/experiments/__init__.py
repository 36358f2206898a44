"""Configuration-driven scenario runs, CSV/SVG output, and the CLI."""

from .config import SCENARIOS, build_system, load_config, validate_config
from .csvio import read_rows, write_meta, write_rows
from .scenarios import (
    SCENARIO_RUNNERS,
    ScenarioResult,
    run_absorption,
    run_dynamical_localization,
    run_fig2,
    run_integrability_breaking,
    run_lemma_suite,
    run_prethermalization,
)
from .svg import line_chart

__all__ = [
    "SCENARIOS",
    "SCENARIO_RUNNERS",
    "ScenarioResult",
    "build_system",
    "line_chart",
    "load_config",
    "read_rows",
    "run_absorption",
    "run_dynamical_localization",
    "run_fig2",
    "run_integrability_breaking",
    "run_lemma_suite",
    "run_prethermalization",
    "validate_config",
    "write_meta",
    "write_rows",
]
