"""Command-line interface.

Three subcommands::

    fml run <config.json> [--out DIR] [--threads K] [--n-max N] [--seed S]
    fml validate <config.json>
    fml render <csv> --svg <out.svg> [--title T]

Exit codes: 0 on success, 1 for configuration problems (including bad
command lines), 2 when a numerical routine fails to converge, 3 when a
run observed a violated bound.  ``run`` writes ``data.csv``,
``meta.json``, and (when the scenario has plottable rows) a
``plot_<scenario>.svg`` rendered straight from the CSV; the directory is
``--out`` when given, else ``<scenario>_<timestamp>`` under the
configured output root.  Everything except the recorded wall time is
byte-reproducible for a fixed configuration and seed, independent of
``--threads`` (set via flag or ``FML_THREADS``).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from .. import __version__
from ..errors import BoundViolation, ConfigError, ConvergenceError
from .config import load_config
from .csvio import read_rows, write_meta, write_rows
from .scenarios import SCENARIO_RUNNERS
from .svg import line_chart

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: A003 - argparse API
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fml", description="Driven-spin effective-Hamiltonian lab")
    parser.add_argument("--version", action="version", version=f"fml {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario from a JSON configuration")
    run.add_argument("config", help="path to the configuration file")
    run.add_argument("--out", help="output directory (default from config or cwd)")
    run.add_argument("--threads", type=int, help="worker threads (default FML_THREADS or 1)")
    run.add_argument("--n-max", type=int, dest="n_max", help="cap on series order")
    run.add_argument("--seed", type=int, help="override the configured seed")

    val = sub.add_parser("validate", help="check a configuration without running")
    val.add_argument("config", help="path to the configuration file")

    ren = sub.add_parser("render", help="render a result CSV to an SVG chart")
    ren.add_argument("csv", help="CSV file produced by 'fml run'")
    ren.add_argument("--svg", required=True, help="output SVG path")
    ren.add_argument("--title", default="", help="chart title")
    return parser


def _resolve_threads(flag: int | None) -> int:
    if flag is not None:
        value = flag
    else:
        env = os.environ.get("FML_THREADS", "").strip()
        if not env:
            return 1
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"FML_THREADS must be an integer, got {env!r}")
    if value < 1:
        raise ConfigError(f"thread count must be at least 1, got {value}")
    return value


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("seed must be non-negative")
        cfg["seed"] = args.seed
    if args.n_max is not None:
        if not 0 <= args.n_max <= 40:
            raise ConfigError("n-max must lie in 0..40")
        cfg["n_max"] = args.n_max
    threads = _resolve_threads(args.threads)
    if args.out:
        out_dir = Path(args.out)
    else:
        stamp = time.strftime("%Y%m%dT%H%M%SZ", time.gmtime())
        root = Path(cfg.get("output_dir", "."))
        out_dir = root / f"{cfg['scenario']}_{stamp}"
    out_dir.mkdir(parents=True, exist_ok=True)

    runner = SCENARIO_RUNNERS[cfg["scenario"]]
    start = time.monotonic()
    result = runner(cfg, threads=threads)
    wall = time.monotonic() - start

    csv_path = out_dir / "data.csv"
    comments = [
        f"scenario: {cfg['scenario']}",
        f"seed: {cfg['seed']}",
        f"generator: fml {__version__}",
    ]
    write_rows(
        csv_path, result.fieldnames, result.rows,
        comments=comments, plot=result.plot,
    )
    svg_name = None
    if result.plot is not None:
        svg_path = out_dir / f"plot_{cfg['scenario']}.svg"
        try:
            _render_csv(csv_path, svg_path)
            svg_name = svg_path.name
        except ConfigError:
            pass  # nothing plottable (say, a not-applicable sweep)
    cfg_echo = {k: v for k, v in cfg.items() if k != "output_dir"}
    meta = {
        "scenario": cfg["scenario"],
        "seed": cfg["seed"],
        "generator": f"fml {__version__}",
        "config": cfg_echo,
        "csv": csv_path.name,
        "svg": svg_name,
        "result": result.meta,
        "wall_time_s": round(wall, 3),
    }
    write_meta(out_dir / "meta.json", meta)
    extras = " and meta.json" if svg_name is None else f", {svg_name}, and meta.json"
    print(f"wrote {csv_path} ({len(result.rows)} rows){extras}")
    if result.violations:
        raise BoundViolation(
            f"{result.violations} bound violation(s); see {csv_path}"
        )
    return 0


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    print(f"configuration OK: scenario={cfg['scenario']}, seed={cfg['seed']}")
    return 0


def _render_csv(csv_path: Path, svg_path: Path, title: str = "") -> None:
    """Render a result CSV to SVG; both subcommands share this path, so a
    run-produced chart and a later re-render are byte-identical."""
    fieldnames, rows, plot, comments = read_rows(csv_path)
    if plot is None:
        raise ConfigError(f"{csv_path} carries no plot hint; cannot choose axes")
    if not title:
        for c in comments:
            if c.startswith("scenario:"):
                title = c.split(":", 1)[1].strip()
                break
    try:
        svg = line_chart(rows, plot, title=title)
    except ValueError as exc:
        raise ConfigError(f"cannot render {csv_path}: {exc}")
    svg_path.write_text(svg, newline="\n")


def _cmd_render(args) -> int:
    path = Path(args.csv)
    if not path.is_file():
        raise ConfigError(f"no such CSV file: {path}")
    _render_csv(path, Path(args.svg), title=args.title)
    print(f"wrote {args.svg}")
    return 0


def main(argv=None) -> int:
    """Entry point; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "render":
            return _cmd_render(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return 2
    except BoundViolation as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
