"""Minimal self-contained SVG line plots (no external assets, reproducible bytes)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 78, 20, 36, 52
COLORS = ("#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad")


@dataclass(frozen=True)
class Series:
    label: str
    xs: Sequence[float]
    ys: Sequence[float]
    dashed: bool = False


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


def _num(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def line_plot(series: Sequence[Series], title: str, xlabel: str, ylabel: str,
              log_y: bool = False, floor: float = 1e-300) -> str:
    """Render the curves as polylines on labelled linear (or log-y) axes."""
    def ty(v):
        return math.log10(max(v, floor)) if log_y else v

    xs_all = [x for s in series for x in s.xs]
    ys_all = [ty(y) for s in series for y in s.ys if math.isfinite(y)]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 <= x0:
        x1 = x0 + 1.0
    if not log_y:
        y0 = min(y0, 0.0)
    if y1 <= y0:
        y1 = y0 + 1.0
    pad = 0.04 * (y1 - y0)
    y0, y1 = (y0 - pad if log_y or y0 < 0 else y0), y1 + pad
    pw, ph = WIDTH - MARGIN_L - MARGIN_R, HEIGHT - MARGIN_T - MARGIN_B

    def px(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN_T + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{MARGIN_T + ph}" x2="{x:.2f}" y2="{MARGIN_T + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{MARGIN_T + ph + 18}" text-anchor="middle">{_num(t)}</text>')
    for t in _ticks(y0, y1):
        y = py(t)
        label = f"1e{int(round(t))}" if log_y else f"{t:.3g}"
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{y:.2f}" x2="{MARGIN_L}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{y + 4:.2f}" text-anchor="end">{label}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{MARGIN_T + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {MARGIN_T + ph / 2:.1f})">{escape(ylabel)}</text>')
    for i, s in enumerate(series):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(ty(y)):.2f}" for x, y in zip(s.xs, s.ys) if math.isfinite(y))
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.3"{dash} points="{pts}"/>')
        ly = MARGIN_T + 16 + 16 * i
        lx = MARGIN_L + pw - 150
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" stroke="{color}" '
                   f'stroke-width="1.3"{dash}/>')
        out.append(f'<text x="{lx + 30}" y="{ly}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
