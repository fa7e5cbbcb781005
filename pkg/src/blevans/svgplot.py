"""Minimal self-contained SVG line plots (no plotting dependency)."""
from __future__ import annotations

from typing import Mapping
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["render_curves"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
W, H, PAD = 640, 480, 56


def _ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    span = hi - lo
    if span <= 0:
        return np.array([lo])
    raw = span / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    return np.arange(np.ceil(lo / step) * step, hi + 0.5 * step, step)


def render_curves(
    curves: Mapping[str, tuple],
    *,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    closed: bool = False,
    origin: bool = False,
) -> str:
    """SVG text for one or more ``label -> (x, y)`` polylines."""
    xs = np.concatenate([np.asarray(c[0], dtype=float) for c in curves.values()])
    ys = np.concatenate([np.asarray(c[1], dtype=float) for c in curves.values()])
    if origin:
        xs = np.append(xs, 0.0)
        ys = np.append(ys, 0.0)
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    mx, my = 0.05 * (x1 - x0), 0.05 * (y1 - y0)
    x0, x1, y0, y1 = x0 - mx, x1 + mx, y0 - my, y1 + my

    def sx(x):
        return PAD + (x - x0) / (x1 - x0) * (W - 2 * PAD)

    def sy(y):
        return H - PAD - (y - y0) / (y1 - y0) * (H - 2 * PAD)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f"<title>{escape(title)}</title>",
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<rect x="{PAD}" y="{PAD}" width="{W - 2 * PAD}" height="{H - 2 * PAD}" fill="none" stroke="#444"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<text x="{sx(t):.1f}" y="{H - PAD + 16}" font-size="11" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<text x="{PAD - 6}" y="{sy(t) + 4:.1f}" font-size="11" text-anchor="end">{t:.3g}</text>')
    if x0 < 0 < x1:
        out.append(f'<line x1="{sx(0):.1f}" y1="{PAD}" x2="{sx(0):.1f}" y2="{H - PAD}" stroke="#bbb"/>')
    if y0 < 0 < y1:
        out.append(f'<line x1="{PAD}" y1="{sy(0):.1f}" x2="{W - PAD}" y2="{sy(0):.1f}" stroke="#bbb"/>')
    for k, (label, (x, y)) in enumerate(curves.items()):
        colour = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(np.asarray(x, float), np.asarray(y, float)))
        tag = "polygon" if closed else "polyline"
        out.append(f'<{tag} points="{pts}" fill="none" stroke="{colour}" stroke-width="1.5"/>')
        if label:
            ly = PAD + 16 + 16 * k
            out.append(f'<line x1="{W - PAD - 110}" y1="{ly - 4}" x2="{W - PAD - 90}" y2="{ly - 4}" stroke="{colour}" stroke-width="2"/>')
            out.append(f'<text x="{W - PAD - 84}" y="{ly}" font-size="11">{escape(label)}</text>')
    if origin:
        out.append(f'<circle cx="{sx(0):.2f}" cy="{sy(0):.2f}" r="3.5" fill="black"><title>origin</title></circle>')
    out.append(f'<text x="{W / 2}" y="{H - 12}" font-size="12" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="14" y="{H / 2}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {H / 2})">{escape(ylabel)}</text>')
    out.append(f'<text x="{W / 2}" y="22" font-size="13" text-anchor="middle">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
