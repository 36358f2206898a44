"""Deterministic CSV and metadata output.

Rows are written with shortest round-trip float formatting (``repr``),
LF line endings, and a fixed column order, so a run with the same
configuration and seed produces byte-identical files regardless of thread
count or wall-clock.  Leading ``#`` comment lines carry provenance and an
optional machine-readable plot hint consumed by the SVG renderer.
"""

from __future__ import annotations

import json
from pathlib import Path

__all__ = ["format_value", "read_rows", "write_meta", "write_rows"]


def format_value(v) -> str:
    """Shortest exact decimal form of a cell value."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if v != v:
            return "nan"
        if v in (float("inf"), float("-inf")):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if isinstance(v, int):
        return str(v)
    s = str(v)
    if any(c in s for c in ",\n\r\""):
        raise ValueError(f"cell value needs quoting, refusing: {s!r}")
    return s


def write_rows(
    path,
    fieldnames: list[str],
    rows: list[dict],
    *,
    comments: list[str] | None = None,
    plot: dict | None = None,
) -> None:
    """Write rows as CSV with comment header and LF endings.

    Args:
        path: Destination file.
        fieldnames: Column order; every row must supply exactly these keys.
        rows: Row dictionaries.
        comments: Provenance lines (written as ``# ...``).
        plot: Optional plot hint, e.g. ``{"x": "n", "y": "distance",
            "series": "period", "logy": True}``; consumed by the renderer.
    """
    lines = []
    for c in comments or []:
        lines.append(f"# {c}")
    if plot is not None:
        lines.append("# plot: " + json.dumps(plot, sort_keys=True))
    lines.append(",".join(fieldnames))
    for row in rows:
        if set(row) != set(fieldnames):
            missing = set(fieldnames) ^ set(row)
            raise ValueError(f"row keys do not match header: {sorted(missing)}")
        lines.append(",".join(format_value(row[k]) for k in fieldnames))
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def _parse_cell(s: str):
    if s == "true":
        return True
    if s == "false":
        return False
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def read_rows(path) -> tuple[list[str], list[dict], dict | None, list[str]]:
    """Read a CSV written by :func:`write_rows`.

    Returns:
        (fieldnames, rows, plot hint or None, comment lines).
    """
    comments: list[str] = []
    plot = None
    fieldnames: list[str] | None = None
    rows: list[dict] = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("plot:"):
                plot = json.loads(body[len("plot:"):])
            else:
                comments.append(body)
            continue
        cells = line.split(",")
        if fieldnames is None:
            fieldnames = cells
        else:
            if len(cells) != len(fieldnames):
                raise ValueError(f"ragged row in {path}: {line!r}")
            rows.append(
                {k: _parse_cell(c) for k, c in zip(fieldnames, cells)}
            )
    if fieldnames is None:
        raise ValueError(f"no header row in {path}")
    return fieldnames, rows, plot, comments


def write_meta(path, meta: dict) -> None:
    """Write run metadata as stably ordered JSON.

    Everything except ``wall_time_s`` is reproducible for a fixed
    configuration and seed; comparisons should drop that key.
    """
    Path(path).write_text(
        json.dumps(meta, indent=2, sort_keys=True, default=_json_default) + "\n",
        newline="\n",
    )


def _json_default(obj):
    try:
        import numpy as np

        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
    except ImportError:  # pragma: no cover
        pass
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")
