"""Minimal self-contained SVG line/scatter writer (no plotting dependency)."""

from __future__ import annotations

import math
from typing import Optional, Sequence


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((s for s in (1 * mag, 2 * mag, 5 * mag, 10 * mag) if s >= raw),
               default=raw)
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * step:
        out.append(round(t, 12))
        t += step
    return out


def _fmt(x: float) -> str:
    if x == 0:
        return "0"
    if abs(x) >= 1e4 or abs(x) < 1e-3:
        return f"{x:.2e}"
    return f"{x:.4g}"


def write_svg_plot(path, xs: Sequence[float], series: dict[str, Sequence[float]],
                   title: str = "", xlabel: str = "", ylabel: str = "",
                   scatter: bool = False, logy: bool = False,
                   width: int = 720, height: int = 480) -> None:
    """One SVG with polyline (or scatter) traces sharing the x axis."""
    colors = ["#1f6fb2", "#c23b22", "#2e8b57", "#8b5a2b", "#6a3d9a", "#444444"]
    ml, mr, mt, mb = 70, 20, 34, 50
    pw, ph = width - ml - mr, height - mt - mb
    ys_all = [y for ys in series.values() for y in ys if math.isfinite(y)]
    if logy:
        ys_all = [math.log10(y) for y in ys_all if y > 0]
    if not xs or not ys_all:
        raise ValueError("nothing to plot")
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def px(x: float) -> float:
        return ml + pw * (x - x0) / (x1 - x0)

    def py(y: float) -> float:
        if logy:
            y = math.log10(y) if y > 0 else y0
        return mt + ph * (1 - (y - y0) / (y1 - y0))

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>']
    if title:
        parts.append(f'<text x="{width/2}" y="20" text-anchor="middle" font-size="14">{title}</text>')
    for tx in _ticks(x0, x1):
        parts.append(f'<line x1="{px(tx):.1f}" y1="{mt+ph}" x2="{px(tx):.1f}" y2="{mt+ph+5}" stroke="#333"/>')
        parts.append(f'<text x="{px(tx):.1f}" y="{mt+ph+18}" text-anchor="middle">{_fmt(tx)}</text>')
    for ty in _ticks(y0, y1):
        yy = mt + ph * (1 - (ty - y0) / (y1 - y0))
        label = _fmt(10 ** ty) if logy else _fmt(ty)
        parts.append(f'<line x1="{ml-5}" y1="{yy:.1f}" x2="{ml}" y2="{yy:.1f}" stroke="#333"/>')
        parts.append(f'<text x="{ml-8}" y="{yy+4:.1f}" text-anchor="end">{label}</text>')
    if xlabel:
        parts.append(f'<text x="{ml+pw/2}" y="{height-10}" text-anchor="middle">{xlabel}</text>')
    if ylabel:
        parts.append(f'<text x="16" y="{mt+ph/2}" text-anchor="middle" '
                     f'transform="rotate(-90 16 {mt+ph/2})">{ylabel}</text>')
    for k, (name, ys) in enumerate(series.items()):
        color = colors[k % len(colors)]
        pts = [(px(x), py(y)) for x, y in zip(xs, ys)
               if math.isfinite(y) and (not logy or y > 0)]
        if scatter:
            for (cx, cy) in pts:
                parts.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="3" fill="{color}"/>')
        else:
            path_d = " ".join(f"{cx:.1f},{cy:.1f}" for cx, cy in pts)
            parts.append(f'<polyline points="{path_d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<rect x="{ml+10}" y="{mt+8+16*k}" width="12" height="4" fill="{color}"/>')
        parts.append(f'<text x="{ml+27}" y="{mt+14+16*k}">{name}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts))
