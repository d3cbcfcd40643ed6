"""Minimal standalone SVG line charts: axes, ticks, legend, one polyline
per series. No external assets, deterministic output for fixed input."""

from __future__ import annotations

import numpy as np

WIDTH, HEIGHT = 640, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 20, 36, 48

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
          "#8c564b", "#17becf", "#7f7f7f")


def _ticks(lo: float, hi: float, count: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10.0 ** np.floor(np.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = np.ceil(lo / step) * step
    vals = np.arange(start, hi + step / 2, step)
    return [float(v) for v in vals]


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def line_chart(series, path: str, title: str = "", xlabel: str = "",
               ylabel: str = "") -> None:
    """Write a line chart to ``path``.

    ``series`` is a list of (label, x, y) triples with array-like x and y.
    """
    xs = np.concatenate([np.asarray(x, dtype=float) for _, x, _ in series])
    ys = np.concatenate([np.asarray(y, dtype=float) for _, _, y in series])
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.04 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    px_w = WIDTH - MARGIN_L - MARGIN_R
    px_h = HEIGHT - MARGIN_T - MARGIN_B

    def to_px(x, y):
        sx = MARGIN_L + (x - x_lo) / (x_hi - x_lo) * px_w
        sy = HEIGHT - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * px_h
        return sx, sy

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    # axes
    x0, y0 = to_px(x_lo, y_lo)
    x1, y1 = to_px(x_hi, y_hi)
    parts.append(f'<line x1="{x0:.1f}" y1="{y0:.1f}" x2="{x1:.1f}" y2="{y0:.1f}" stroke="black"/>')
    parts.append(f'<line x1="{x0:.1f}" y1="{y0:.1f}" x2="{x0:.1f}" y2="{y1:.1f}" stroke="black"/>')
    for tx in _ticks(x_lo, x_hi):
        sx, _ = to_px(tx, y_lo)
        parts.append(f'<line x1="{sx:.1f}" y1="{y0:.1f}" x2="{sx:.1f}" y2="{y0 + 5:.1f}" stroke="black"/>')
        parts.append(f'<text x="{sx:.1f}" y="{y0 + 18:.1f}" text-anchor="middle">{_fmt(tx)}</text>')
    for ty in _ticks(y_lo, y_hi):
        _, sy = to_px(x_lo, ty)
        parts.append(f'<line x1="{x0 - 5:.1f}" y1="{sy:.1f}" x2="{x0:.1f}" y2="{sy:.1f}" stroke="black"/>')
        parts.append(f'<text x="{x0 - 8:.1f}" y="{sy + 4:.1f}" text-anchor="end">{_fmt(ty)}</text>')
    # series
    for k, (label, x, y) in enumerate(series):
        color = COLORS[k % len(COLORS)]
        pts = " ".join(f"{to_px(float(a), float(b))[0]:.2f},{to_px(float(a), float(b))[1]:.2f}"
                       for a, b in zip(np.asarray(x, float), np.asarray(y, float)))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = MARGIN_T + 14 * k
        lx = WIDTH - MARGIN_R - 130
        parts.append(f'<line x1="{lx:.1f}" y1="{ly - 4:.1f}" x2="{lx + 18:.1f}" y2="{ly - 4:.1f}" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{lx + 24:.1f}" y="{ly:.1f}">{label}</text>')
    if title:
        parts.append(f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>')
    if xlabel:
        parts.append(f'<text x="{(MARGIN_L + WIDTH - MARGIN_R) / 2:.1f}" y="{HEIGHT - 12:.1f}" '
                     f'text-anchor="middle">{xlabel}</text>')
    if ylabel:
        parts.append(f'<text x="16" y="{(MARGIN_T + HEIGHT - MARGIN_B) / 2:.1f}" text-anchor="middle" '
                     f'transform="rotate(-90 16 {(MARGIN_T + HEIGHT - MARGIN_B) / 2:.1f})">{ylabel}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
