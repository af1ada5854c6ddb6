"""Small self-contained SVG charts: annotated heatmaps, line series, box plots."""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

FONT = "font-family=\"DejaVu Sans, Arial, sans-serif\""

# viridis endpoints and midpoint, linearly interpolated
_STOPS = ((0.0, (68, 1, 84)), (0.5, (33, 145, 140)), (1.0, (253, 231, 37)))


def _num(v: float) -> str:
    s = f"{v:.2f}"
    return s.rstrip("0").rstrip(".") if "." in s else s


def colour(t: float) -> str:
    t = 0.0 if math.isnan(t) else min(1.0, max(0.0, t))
    for (t0, c0), (t1, c1) in zip(_STOPS, _STOPS[1:]):
        if t <= t1:
            f = (t - t0) / (t1 - t0)
            rgb = [round(a + (b - a) * f) for a, b in zip(c0, c1)]
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*_STOPS[-1][1])


def _doc(width: float, height: float, body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" height="{_num(height)}" '
            f'viewBox="0 0 {_num(width)} {_num(height)}">')
    return "\n".join([head, f'<rect width="100%" height="100%" fill="white"/>', *body, "</svg>"]) + "\n"


def _text(x, y, s, size=11, anchor="middle", extra="") -> str:
    return (f'<text x="{_num(x)}" y="{_num(y)}" font-size="{size}" text-anchor="{anchor}" {FONT}{extra}>'
            f"{escape(str(s))}</text>")


def heatmap_body(labels: Sequence[str], values, title: str, x0=0.0, y0=0.0, cell=48.0, fmt="{:.2f}") -> tuple[list[str], float, float]:
    n = len(labels)
    flat = [float(values[i][j]) for i in range(n) for j in range(n)]
    lo, hi = min(flat), max(flat)
    span = hi - lo if hi > lo else 1.0
    left, top = x0 + 110, y0 + 40
    out = [_text(left + n * cell / 2, y0 + 20, title, 14)]
    for i in range(n):
        out.append(_text(left - 6, top + (i + 0.5) * cell + 4, labels[i], 10, "end"))
        out.append(_text(left + (i + 0.5) * cell, top + n * cell + 14, labels[i], 10,
                         extra=f' transform="rotate(30 {_num(left + (i + 0.5) * cell)} {_num(top + n * cell + 14)})"'))
        for j in range(n):
            v = float(values[i][j])
            t = (v - lo) / span
            x, y = left + j * cell, top + i * cell
            out.append(f'<rect x="{_num(x)}" y="{_num(y)}" width="{_num(cell)}" height="{_num(cell)}" '
                       f'fill="{colour(t)}" stroke="white" data-row="{i}" data-col="{j}" data-value="{v!r}"/>')
            ink = "black" if t > 0.55 else "white"
            out.append(_text(x + cell / 2, y + cell / 2 + 4, fmt.format(v), 10, extra=f' fill="{ink}"'))
    return out, left + n * cell + 20 - x0, top + n * cell + 60 - y0


def heatmap(labels: Sequence[str], values, title: str = "", fmt: str | None = None) -> str:
    """Annotated similarity heatmap; each cell carries its exact value in ``data-value``."""
    if fmt is None:
        big = max(abs(float(v)) for row in values for v in row) if len(labels) else 0
        fmt = "{:.0f}" if big >= 100 else "{:.2f}"
    body, w, h = heatmap_body(labels, values, title, fmt=fmt)
    return _doc(w, h, body)


def matrix_heatmap(m, title: str | None = None) -> str:
    return heatmap(m.labels, m.values, title or f"{m.metric.upper()} similarity matrix")


def _axis_range(vals: Sequence[float]) -> tuple[float, float]:
    if not vals:
        return 1.0, 9.0
    lo, hi = min(vals), max(vals)
    if hi - lo < 1e-9:
        lo, hi = lo - 0.5, hi + 0.5
    pad = (hi - lo) * 0.08
    return lo - pad, hi + pad


def _y_axis(x, top, height, lo, hi, ticks=5) -> list[str]:
    out = [f'<line x1="{_num(x)}" y1="{_num(top)}" x2="{_num(x)}" y2="{_num(top + height)}" stroke="black"/>']
    for k in range(ticks + 1):
        v = lo + (hi - lo) * k / ticks
        y = top + height - height * k / ticks
        out.append(f'<line x1="{_num(x - 4)}" y1="{_num(y)}" x2="{_num(x)}" y2="{_num(y)}" stroke="black"/>')
        out.append(_text(x - 6, y + 4, f"{v:.2f}", 9, "end"))
    return out


def series_body(points: Sequence[tuple[str, float | None]], title: str, x0=0.0, y0=0.0,
                width=640.0, height=240.0) -> tuple[list[str], float, float]:
    """Line chart; ``None`` values break the line and are drawn as gap ticks."""
    left, top = x0 + 60, y0 + 36
    present = [v for _, v in points if v is not None]
    lo, hi = _axis_range(present)
    n = len(points)
    step = width / max(1, n - 1) if n > 1 else 0.0

    def xy(i, v):
        return left + (i * step if n > 1 else width / 2), top + height - (v - lo) / (hi - lo) * height

    out = [_text(left + width / 2, y0 + 18, title, 14)]
    out += _y_axis(left, top, height, lo, hi)
    out.append(f'<line x1="{_num(left)}" y1="{_num(top + height)}" x2="{_num(left + width)}" '
               f'y2="{_num(top + height)}" stroke="black"/>')
    run: list[str] = []
    runs = []
    for i, (_, v) in enumerate(points):
        if v is None:
            if run:
                runs.append(run)
            run = []
        else:
            x, y = xy(i, v)
            run.append(f"{_num(x)},{_num(y)}")
    if run:
        runs.append(run)
    for r in runs:
        out.append(f'<polyline points="{" ".join(r)}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>')
    every = max(1, math.ceil(n / 20))
    for i, (lab, v) in enumerate(points):
        x = xy(i, lo)[0]
        if i % every == 0:
            out.append(_text(x, top + height + 28, lab, 8,
                             extra=f' transform="rotate(45 {_num(x)} {_num(top + height + 28)})"'))
        if v is None:
            out.append(f'<line class="gap" x1="{_num(x)}" y1="{_num(top + height - 6)}" x2="{_num(x)}" '
                       f'y2="{_num(top + height + 6)}" stroke="#d62728" data-label="{escape(lab)}"/>')
        else:
            _, y = xy(i, v)
            out.append(f'<circle class="point" cx="{_num(x)}" cy="{_num(y)}" r="2.5" fill="#1f77b4" '
                       f'data-label="{escape(lab)}" data-value="{v!r}"/>')
    return out, width + 90, height + 100


def line_series(points: Sequence[tuple[str, float | None]], title: str = "") -> str:
    body, w, h = series_body(points, title)
    return _doc(w, h, body)


def box_plot(stats, scatter: Sequence[tuple[int, float, str]] = (), title: str = "",
             tables: Sequence[tuple[str, Sequence[tuple[str, float]], Sequence[tuple[str, float]]]] = ()) -> str:
    """Yearly box plot, optional scatter overlay ``(year, score, label)`` and top/bottom word tables."""
    width, height = 520.0, 300.0
    left, top = 60.0, 40.0
    vals = [v for s in stats for v in (s.min, s.max)] + [v for _, v, _ in scatter if v is not None]
    lo, hi = _axis_range(vals)
    years = [s.year for s in stats]
    slot = width / max(1, len(years))

    def ypos(v):
        return top + height - (v - lo) / (hi - lo) * height

    out = [_text(left + width / 2, 22, title, 14)]
    out += _y_axis(left, top, height, lo, hi)
    for k, s in enumerate(stats):
        cx = left + slot * (k + 0.5)
        bw = min(40.0, slot * 0.5)
        out.append(f'<g class="box" data-year="{s.year}" data-min="{s.min!r}" data-q1="{s.q1!r}" '
                   f'data-median="{s.median!r}" data-q3="{s.q3!r}" data-max="{s.max!r}">')
        out.append(f'<line x1="{_num(cx)}" y1="{_num(ypos(s.max))}" x2="{_num(cx)}" y2="{_num(ypos(s.min))}" stroke="black"/>')
        out.append(f'<rect x="{_num(cx - bw / 2)}" y="{_num(ypos(s.q3))}" width="{_num(bw)}" '
                   f'height="{_num(max(0.5, ypos(s.q1) - ypos(s.q3)))}" fill="#aec7e8" stroke="black"/>')
        out.append(f'<line x1="{_num(cx - bw / 2)}" y1="{_num(ypos(s.median))}" x2="{_num(cx + bw / 2)}" '
                   f'y2="{_num(ypos(s.median))}" stroke="black" stroke-width="2"/>')
        out.append("</g>")
        out.append(_text(cx, top + height + 16, s.year, 10))
    for year, v, lab in scatter:
        if v is None or year not in years:
            continue
        cx = left + slot * (years.index(year) + 0.5)
        out.append(f'<circle class="entity" cx="{_num(cx)}" cy="{_num(ypos(v))}" r="4" fill="#d62728" '
                   f'fill-opacity="0.7" data-label="{escape(lab)}" data-value="{v!r}"/>')
    total_w = left + width + 20
    ty = top
    for caption, top5, bottom5 in tables:
        tx = left + width + 30
        out.append(_text(tx, ty, caption, 11, "start"))
        out.append(_text(tx, ty + 16, "top", 10, "start") + _text(tx + 120, ty + 16, "bottom", 10, "start"))
        for r in range(max(len(top5), len(bottom5))):
            yy = ty + 30 + 13 * r
            if r < len(top5):
                out.append(_text(tx, yy, f"{top5[r][0]} {top5[r][1]:.2f}", 9, "start"))
            if r < len(bottom5):
                out.append(_text(tx + 120, yy, f"{bottom5[r][0]} {bottom5[r][1]:.2f}", 9, "start"))
        ty += 30 + 13 * 5 + 16
        total_w = max(total_w, tx + 240)
    return _doc(total_w, max(height + 70, ty), out)


def combined(points: Sequence[tuple[str, float | None]], labels: Sequence[str], values, title: str = "") -> str:
    """Sentiment series panel on the left, canonical similarity heatmap on the right."""
    left, lw, lh = series_body(points, "sentiment per period", 0, 30, width=360, height=220)
    right, rw, rh = heatmap_body(labels, values, "canonical DTW similarity", lw + 10, 30)
    body = [_text((lw + rw) / 2, 20, title, 15)] + left + right
    return _doc(lw + rw + 20, max(lh, rh) + 40, body)
