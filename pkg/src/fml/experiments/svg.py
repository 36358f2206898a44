"""Minimal deterministic SVG line charts.

No plotting dependency: charts are assembled from polylines and text with
fixed two-decimal coordinate formatting, so the same rows always render to
the same bytes.  Good enough for the convergence and drift figures the
scenarios produce; not a general plotting library.
"""

from __future__ import annotations

import math

__all__ = ["line_chart"]

_PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)

_W, _H = 720, 480
_ML, _MR, _MT, _MB = 78, 24, 42, 56


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _tick_label(v: float) -> str:
    if v == 0:
        return "0"
    a = abs(v)
    if 1e-3 <= a < 1e5:
        s = f"{v:.6g}"
    else:
        s = f"{v:.1e}"
    return s


def _log_ticks(lo: float, hi: float) -> list[float]:
    lo_d = math.floor(math.log10(lo))
    hi_d = math.ceil(math.log10(hi))
    span = hi_d - lo_d
    step = max(1, math.ceil(span / 8))
    return [10.0**d for d in range(lo_d, hi_d + 1, step)]


def line_chart(
    rows: list[dict],
    plot: dict,
    *,
    title: str = "",
) -> str:
    """Render rows to an SVG line chart.

    Args:
        rows: Data rows (dicts of column -> value).
        plot: Hint with keys ``x``, ``y`` (column names), optional
            ``series`` (grouping column), ``logy`` (bool), ``x_label``,
            ``y_label``.
        title: Chart title (defaults to "y vs x").

    Returns:
        The SVG document as a string.
    """
    xcol, ycol = plot["x"], plot["y"]
    series_col = plot.get("series")
    logy = bool(plot.get("logy", False))

    groups: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        key = format(row[series_col]) if series_col else ""
        x, y = row.get(xcol), row.get(ycol)
        if not isinstance(x, (int, float)) or not isinstance(y, (int, float)):
            continue
        x, y = float(x), float(y)
        if math.isnan(x) or math.isnan(y) or math.isinf(x) or math.isinf(y):
            continue
        if logy and y <= 0.0:
            continue
        groups.setdefault(key, []).append((x, y))
    groups = {k: sorted(v) for k, v in sorted(groups.items()) if v}
    if not groups:
        raise ValueError("nothing to plot: no finite data points")

    xs = [p[0] for pts in groups.values() for p in pts]
    ys = [p[1] for pts in groups.values() for p in pts]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi - x_lo < 1e-300:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if logy:
        ly_lo, ly_hi = math.log10(y_lo), math.log10(y_hi)
        if ly_hi - ly_lo < 1e-9:
            ly_lo, ly_hi = ly_lo - 0.5, ly_hi + 0.5
        y_ticks = _log_ticks(10.0**ly_lo, 10.0**ly_hi)
        ly_lo = min(ly_lo, math.log10(y_ticks[0]))
        ly_hi = max(ly_hi, math.log10(y_ticks[-1]))

        def y_pix(y: float) -> float:
            f = (math.log10(y) - ly_lo) / (ly_hi - ly_lo)
            return _H - _MB - f * (_H - _MT - _MB)

    else:
        if y_hi - y_lo < 1e-300:
            y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
        pad = 0.04 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad
        y_ticks = _nice_ticks(y_lo, y_hi)

        def y_pix(y: float) -> float:
            f = (y - y_lo) / (y_hi - y_lo)
            return _H - _MB - f * (_H - _MT - _MB)

    x_ticks = _nice_ticks(x_lo, x_hi)

    def x_pix(x: float) -> float:
        f = (x - x_lo) / (x_hi - x_lo)
        return _ML + f * (_W - _ML - _MR)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    if not title:
        title = f"{ycol} vs {xcol}"
    parts.append(
        f'<text x="{_W / 2:.0f}" y="24" text-anchor="middle" '
        f'font-size="15">{_esc(title)}</text>'
    )

    # frame and grid
    x0, x1 = _ML, _W - _MR
    y0, y1 = _H - _MB, _MT
    for t in x_ticks:
        px = x_pix(t)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{y0}" x2="{_fmt(px)}" y2="{y1}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{y0 + 18}" text-anchor="middle">'
            f"{_esc(_tick_label(t))}</text>"
        )
    for t in y_ticks:
        py = y_pix(t)
        parts.append(
            f'<line x1="{x0}" y1="{_fmt(py)}" x2="{x1}" y2="{_fmt(py)}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x0 - 6}" y="{_fmt(py + 4)}" text-anchor="end">'
            f"{_esc(_tick_label(t))}</text>"
        )
    parts.append(
        f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{(x0 + x1) / 2:.0f}" y="{_H - 14}" text-anchor="middle">'
        f"{_esc(plot.get('x_label', xcol))}</text>"
    )
    parts.append(
        f'<text x="18" y="{(y0 + y1) / 2:.0f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {(y0 + y1) / 2:.0f})">'
        f"{_esc(plot.get('y_label', ycol))}</text>"
    )

    for i, (key, pts) in enumerate(groups.items()):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{_fmt(x_pix(x))},{_fmt(y_pix(y))}" for x, y in pts)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )
        for x, y in pts:
            parts.append(
                f'<circle cx="{_fmt(x_pix(x))}" cy="{_fmt(y_pix(y))}" r="2.2" '
                f'fill="{color}"/>'
            )
        if series_col:
            ly = y1 + 16 + 16 * i
            parts.append(
                f'<line x1="{x1 - 150}" y1="{ly - 4}" x2="{x1 - 126}" '
                f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
            )
            parts.append(
                f'<text x="{x1 - 120}" y="{ly}">'
                f"{_esc(series_col)}={_esc(key)}</text>"
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _esc(s: str) -> str:
    return (
        str(s)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
    )
