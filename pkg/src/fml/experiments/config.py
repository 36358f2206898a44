"""JSON run-configuration loading and validation.

A configuration names a scenario, optionally a system, and per-scenario
parameters.  Validation is strict: unknown keys anywhere raise
:class:`~fml.errors.ConfigError` so typos cannot silently fall back to
defaults.

Example::

    {
      "scenario": "fig2",
      "seed": 7,
      "system": {"model": "heisenberg_ring", "sites": 8, "period": 0.2},
      "params": {"periods": [0.05, 0.1, 0.2], "n_max": 25}
    }

An explicit system spells out every term::

    {
      "sites": 4, "period": 0.5, "bonds": "chain",
      "static": [{"sites": [0, 1], "letters": "ZZ", "coeff": 1.0}],
      "driving": [
        {"t1": 0.5,
         "terms": [{"sites": [0], "letters": "X", "poly": [0.0, 2.0]}]}
      ]
    }

Each driving segment covers time up to its ``t1`` (from the previous
segment's end), and ``poly`` lists coefficients of powers of global time.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import ConfigError
from ..pauli_algebra import PauliOperator, PauliString
from ..system import DrivenSystem, chain_bonds, heisenberg_ring, ring_bonds
from ..time_poly import PiecewisePolyOperator, TimePolyOperator

__all__ = ["SCENARIOS", "build_system", "load_config", "validate_config"]

SCENARIOS = (
    "fig2",
    "theorem1_sweep",
    "theorem2_local",
    "absorption",
    "prethermalization",
    "dynamical_localization",
    "integrability_breaking",
    "lemma_suite",
)

_TOP_KEYS = {"scenario", "seed", "output_dir", "system", "params", "n_max"}

_PARAM_KEYS = {
    "fig2": {"periods", "n_max", "tol"},
    "theorem1_sweep": {"m_max", "tol"},
    "theorem2_local": {"region", "m_max", "site", "t_grid", "observables", "tol"},
    "absorption": {"n", "ms", "de_grid", "tol"},
    "prethermalization": {"observable", "state", "m_max", "shell_halfwidth", "tol"},
    "dynamical_localization": {"omega_factors", "m_max", "state", "tol"},
    "integrability_breaking": {
        "epsilons", "threshold", "observable", "perturbation",
        "state", "m_max", "tol",
    },
    "lemma_suite": {"families", "n_instances", "sites", "period", "drive", "tol"},
}

# scenarios that build their own instances and need no system block
_SYSTEMLESS = {"lemma_suite"}


def _fail(msg: str) -> None:
    raise ConfigError(msg)


def _check_number(val, name: str, *, positive: bool = False) -> float:
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        _fail(f"{name} must be a number, got {val!r}")
    if positive and not val > 0:
        _fail(f"{name} must be positive, got {val!r}")
    return float(val)


def _check_int(val, name: str, *, lo: int | None = None, hi: int | None = None) -> int:
    if isinstance(val, bool) or not isinstance(val, int):
        _fail(f"{name} must be an integer, got {val!r}")
    if lo is not None and val < lo:
        _fail(f"{name} must be at least {lo}, got {val}")
    if hi is not None and val > hi:
        _fail(f"{name} must be at most {hi}, got {val}")
    return int(val)


def _check_term(entry, n_sites: int, name: str, *, with_poly: bool):
    if not isinstance(entry, dict):
        _fail(f"{name} must be an object")
    allowed = {"sites", "letters", "poly" if with_poly else "coeff"}
    unknown = set(entry) - allowed
    if unknown:
        _fail(f"{name} has unknown keys {sorted(unknown)}")
    sites = entry.get("sites")
    letters = entry.get("letters")
    if not isinstance(sites, list) or not all(isinstance(s, int) for s in sites):
        _fail(f"{name}.sites must be a list of integers")
    if any(not 0 <= s < n_sites for s in sites):
        _fail(f"{name}.sites out of range for {n_sites} sites")
    if not isinstance(letters, str):
        _fail(f"{name}.letters must be a string")
    if with_poly:
        poly = entry.get("poly")
        if not isinstance(poly, list) or not poly:
            _fail(f"{name}.poly must be a non-empty list of numbers")
        for c in poly:
            _check_number(c, f"{name}.poly entry")
    else:
        _check_number(entry.get("coeff"), f"{name}.coeff")


def _validate_system(sys_cfg) -> dict:
    if not isinstance(sys_cfg, dict):
        _fail("system must be an object")
    if "model" in sys_cfg:
        allowed = {"model", "sites", "period", "jx", "jy", "jz", "drive"}
        unknown = set(sys_cfg) - allowed
        if unknown:
            _fail(f"system has unknown keys {sorted(unknown)}")
        if sys_cfg["model"] != "heisenberg_ring":
            _fail(f"unknown model {sys_cfg['model']!r}")
        _check_int(sys_cfg.get("sites"), "system.sites", lo=2, hi=12)
        _check_number(sys_cfg.get("period"), "system.period", positive=True)
        for key in ("jx", "jy", "jz", "drive"):
            if key in sys_cfg:
                _check_number(sys_cfg[key], f"system.{key}")
        return dict(sys_cfg)

    allowed = {"sites", "period", "bonds", "static", "driving"}
    unknown = set(sys_cfg) - allowed
    if unknown:
        _fail(f"system has unknown keys {sorted(unknown)}")
    n = _check_int(sys_cfg.get("sites"), "system.sites", lo=1, hi=12)
    period = _check_number(sys_cfg.get("period"), "system.period", positive=True)
    bonds = sys_cfg.get("bonds", "chain")
    if isinstance(bonds, str):
        if bonds not in ("chain", "ring"):
            _fail(f"system.bonds must be 'chain', 'ring', or a pair list")
    elif isinstance(bonds, list):
        for pair in bonds:
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(x, int) for x in pair)
            ):
                _fail("system.bonds entries must be [i, j] integer pairs")
    else:
        _fail("system.bonds must be 'chain', 'ring', or a pair list")
    static = sys_cfg.get("static", [])
    if not isinstance(static, list):
        _fail("system.static must be a list of terms")
    for i, term in enumerate(static):
        _check_term(term, n, f"system.static[{i}]", with_poly=False)
    driving = sys_cfg.get("driving")
    if not isinstance(driving, list) or not driving:
        _fail("system.driving must be a non-empty list of segments")
    prev = 0.0
    for i, seg in enumerate(driving):
        if not isinstance(seg, dict):
            _fail(f"system.driving[{i}] must be an object")
        unknown = set(seg) - {"t1", "terms"}
        if unknown:
            _fail(f"system.driving[{i}] has unknown keys {sorted(unknown)}")
        t1 = _check_number(seg.get("t1"), f"system.driving[{i}].t1", positive=True)
        if t1 <= prev:
            _fail("system.driving segments must have increasing t1")
        prev = t1
        terms = seg.get("terms", [])
        if not isinstance(terms, list):
            _fail(f"system.driving[{i}].terms must be a list")
        for j, term in enumerate(terms):
            _check_term(term, n, f"system.driving[{i}].terms[{j}]", with_poly=True)
    if abs(prev - period) > 1e-12 * max(period, 1.0):
        _fail(
            f"driving segments end at {prev}, but the period is {period}"
        )
    return dict(sys_cfg)


def _validate_list_of_numbers(val, name: str, *, positive: bool = False) -> list:
    if not isinstance(val, list) or not val:
        _fail(f"{name} must be a non-empty list of numbers")
    return [_check_number(v, f"{name} entry", positive=positive) for v in val]


def _validate_terms(val, n_sites: int, name: str) -> list:
    if not isinstance(val, list) or not val:
        _fail(f"{name} must be a non-empty list of terms")
    for i, term in enumerate(val):
        _check_term(term, n_sites, f"{name}[{i}]", with_poly=False)
    return list(val)


def _validate_state(params: dict, checked: dict) -> None:
    if "state" in params and params["state"] not in ("neel", "zero"):
        _fail("params.state must be 'neel' or 'zero'")


def _validate_m_max(params: dict, checked: dict) -> None:
    if "m_max" in params:
        checked["m_max"] = _check_int(params["m_max"], "params.m_max", lo=1)


def validate_config(cfg) -> dict:
    """Validate a parsed configuration, returning a normalized copy.

    Raises:
        ConfigError: On any unknown key, bad type, or out-of-range value.
    """
    if not isinstance(cfg, dict):
        _fail("configuration must be a JSON object")
    unknown = set(cfg) - _TOP_KEYS
    if unknown:
        _fail(f"unknown top-level keys {sorted(unknown)}")
    scenario = cfg.get("scenario")
    if scenario not in SCENARIOS:
        _fail(f"scenario must be one of {', '.join(SCENARIOS)}; got {scenario!r}")

    out = {"scenario": scenario}
    out["seed"] = _check_int(cfg.get("seed", 0), "seed", lo=0)
    if "output_dir" in cfg:
        if not isinstance(cfg["output_dir"], str) or not cfg["output_dir"]:
            _fail("output_dir must be a non-empty string")
        out["output_dir"] = cfg["output_dir"]
    if "n_max" in cfg:
        out["n_max"] = _check_int(cfg["n_max"], "n_max", lo=0, hi=40)

    if "system" in cfg:
        out["system"] = _validate_system(cfg["system"])
    elif scenario not in _SYSTEMLESS:
        _fail(f"scenario {scenario!r} needs a system block")

    params = cfg.get("params", {})
    if not isinstance(params, dict):
        _fail("params must be an object")
    allowed = _PARAM_KEYS[scenario]
    unknown = set(params) - allowed
    if unknown:
        _fail(f"params for {scenario} has unknown keys {sorted(unknown)}")
    checked = dict(params)
    n_sites = out["system"]["sites"] if "system" in out else 0
    if "tol" in params:
        checked["tol"] = _check_number(params["tol"], "params.tol", positive=True)
    if scenario == "fig2":
        if "periods" in params:
            checked["periods"] = _validate_list_of_numbers(
                params["periods"], "params.periods", positive=True
            )
        if "n_max" in params:
            checked["n_max"] = _check_int(params["n_max"], "params.n_max", lo=0, hi=40)
    elif scenario == "theorem1_sweep":
        _validate_m_max(params, checked)
    elif scenario == "theorem2_local":
        _validate_m_max(params, checked)
        if "region" in params:
            region = params["region"]
            if not isinstance(region, list) or not region:
                _fail("params.region must be a non-empty list of sites")
            checked["region"] = [
                _check_int(s, "params.region entry", lo=0, hi=n_sites - 1)
                for s in region
            ]
        if "site" in params:
            checked["site"] = _check_int(
                params["site"], "params.site", lo=0, hi=n_sites - 1
            )
        if "t_grid" in params:
            grid = _validate_list_of_numbers(
                params["t_grid"], "params.t_grid", positive=True
            )
            if any(b <= a for a, b in zip(grid, grid[1:])):
                _fail("params.t_grid must be strictly increasing")
            checked["t_grid"] = grid
        if "observables" in params:
            obs = params["observables"]
            if (
                not isinstance(obs, list)
                or not obs
                or not set(obs).issubset({"X", "Y", "Z"})
            ):
                _fail("params.observables must be a non-empty subset of X, Y, Z")
            checked["observables"] = list(obs)
    elif scenario == "absorption":
        if "n" in params:
            checked["n"] = _check_int(params["n"], "params.n", lo=0, hi=40)
        if "ms" in params:
            ms = params["ms"]
            if not isinstance(ms, list) or not ms:
                _fail("params.ms must be a non-empty list of period counts")
            checked["ms"] = [
                _check_int(m, "params.ms entry", lo=0) for m in ms
            ]
        if "de_grid" in params:
            checked["de_grid"] = _validate_list_of_numbers(
                params["de_grid"], "params.de_grid"
            )
    elif scenario == "prethermalization":
        _validate_m_max(params, checked)
        _validate_state(params, checked)
        if "observable" in params:
            checked["observable"] = _validate_terms(
                params["observable"], n_sites, "params.observable"
            )
        if "shell_halfwidth" in params:
            hw = _check_number(
                params["shell_halfwidth"], "params.shell_halfwidth", positive=True
            )
            if hw > 1.0:
                _fail("params.shell_halfwidth is a fraction of the span (<= 1)")
            checked["shell_halfwidth"] = hw
    elif scenario == "dynamical_localization":
        if "omega_factors" in params:
            factors = _validate_list_of_numbers(
                params["omega_factors"], "params.omega_factors", positive=True
            )
            if len(factors) < 3:
                _fail("params.omega_factors needs at least three frequencies")
            checked["omega_factors"] = factors
        _validate_m_max(params, checked)
        _validate_state(params, checked)
    elif scenario == "integrability_breaking":
        if "epsilons" in params:
            checked["epsilons"] = _validate_list_of_numbers(
                params["epsilons"], "params.epsilons", positive=True
            )
        if "threshold" in params:
            checked["threshold"] = _check_number(
                params["threshold"], "params.threshold", positive=True
            )
        for key in ("observable", "perturbation"):
            if key in params:
                checked[key] = _validate_terms(
                    params[key], n_sites, f"params.{key}"
                )
        _validate_m_max(params, checked)
        _validate_state(params, checked)
    elif scenario == "lemma_suite":
        if "families" in params:
            fams = params["families"]
            known = {"lemma1", "corollary1", "lemma3", "lemma4", "lemma5", "lemma6"}
            if (
                not isinstance(fams, list)
                or not fams
                or not set(fams).issubset(known)
            ):
                _fail(f"params.families must be a subset of {sorted(known)}")
            checked["families"] = list(fams)
        if "n_instances" in params:
            checked["n_instances"] = _check_int(
                params["n_instances"], "params.n_instances", lo=1, hi=10000
            )
        if "sites" in params:
            checked["sites"] = _check_int(params["sites"], "params.sites", lo=2, hi=8)
        if "period" in params:
            checked["period"] = _check_number(
                params["period"], "params.period", positive=True
            )
        if "drive" in params:
            drive = _check_number(params["drive"], "params.drive")
            if drive < 0:
                _fail("params.drive must be non-negative")
            checked["drive"] = drive
    out["params"] = checked
    return out


def load_config(path) -> dict:
    """Read and validate a JSON configuration file."""
    p = Path(path)
    if not p.is_file():
        _fail(f"no such configuration file: {p}")
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        _fail(f"invalid JSON in {p}: {exc}")
    return validate_config(raw)


def build_system(sys_cfg: dict) -> DrivenSystem:
    """Construct the driven system described by a validated system block."""
    if "model" in sys_cfg:
        kwargs = {
            k: sys_cfg[k] for k in ("jx", "jy", "jz", "drive") if k in sys_cfg
        }
        return heisenberg_ring(sys_cfg["sites"], sys_cfg["period"], **kwargs)

    n = sys_cfg["sites"]
    period = float(sys_cfg["period"])
    bonds = sys_cfg.get("bonds", "chain")
    if bonds == "chain":
        bond_list = chain_bonds(n)
    elif bonds == "ring":
        bond_list = ring_bonds(n)
    else:
        bond_list = tuple((int(a), int(b)) for a, b in bonds)

    static = PauliOperator.from_strings(
        n,
        [
            PauliString(tuple(t["sites"]), t["letters"], t["coeff"])
            for t in sys_cfg.get("static", [])
        ],
    )
    segments = []
    prev = 0.0
    for seg in sys_cfg["driving"]:
        t1 = float(seg["t1"])
        degree = max(
            (len(t["poly"]) for t in seg.get("terms", [])), default=1
        )
        coeffs = [PauliOperator.zero(n) for _ in range(degree)]
        for t in seg.get("terms", []):
            string = PauliString(tuple(t["sites"]), t["letters"], 1.0)
            for power, c in enumerate(t["poly"]):
                if c:
                    coeffs[power] = coeffs[power] + PauliOperator.from_strings(
                        n, [PauliString(string.sites, string.letters, c)]
                    )
        segments.append(TimePolyOperator(coeffs, t1, prev, 0))
        prev = t1
    driving = PiecewisePolyOperator(segments)
    return DrivenSystem(n, bond_list, static, driving, period)
