"""Minimal SVG line charts, no plotting dependency."""

from __future__ import annotations

import math
from typing import Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _nice_step(span: float, target: int = 5) -> float:
    """Tick spacing of 1, 2 or 5 times a power of ten, never below 1."""
    if span <= 0:
        return 1.0
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        if raw <= mult * mag:
            return max(1.0, mult * mag)
    return max(1.0, 10 * mag)


def line_chart(
    series: Mapping[str, Sequence[float]],
    x: Sequence[float],
    title: str = "",
    x_label: str = "epoch",
    y_label: str = "count",
    width: int = 800,
    height: int = 600,
) -> str:
    """One polyline per entry of ``series``, all sharing the ``x`` values."""
    left, right, top, bottom = 70, 130, 50, 60
    plot_w = width - left - right
    plot_h = height - top - bottom
    x_min, x_max = (min(x), max(x)) if x else (0, 1)
    if x_max == x_min:
        x_max = x_min + 1
    y_max = max((max(v) for v in series.values() if len(v)), default=1) or 1

    def sx(v):
        return left + (v - x_min) / (x_max - x_min) * plot_w

    def sy(v):
        return top + plot_h - v / y_max * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="28" text-anchor="middle" font-family="sans-serif" '
        f'font-size="18">{escape(title)}</text>',
        f'<g stroke="black" stroke-width="1">'
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}"/>'
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}"/></g>',
    ]

    ticks = ['<g font-family="sans-serif" font-size="11">']
    step = _nice_step(y_max)
    v = 0.0
    while v <= y_max + 1e-9:
        y = sy(v)
        ticks.append(f'<line x1="{left - 4}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        ticks.append(f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end">{v:g}</text>')
        v += step
    step = _nice_step(x_max - x_min)
    v = float(x_min)
    while v <= x_max + 1e-9:
        xx = sx(v)
        ticks.append(f'<line x1="{xx:.2f}" y1="{top + plot_h}" x2="{xx:.2f}" y2="{top + plot_h + 4}" stroke="black"/>')
        ticks.append(f'<text x="{xx:.2f}" y="{top + plot_h + 18}" text-anchor="middle">{v:g}</text>')
        v += step
    ticks.append("</g>")
    out += ticks
    out.append(
        f'<text x="{left + plot_w / 2:.1f}" y="{height - 15}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{escape(x_label)}</text>'
    )
    out.append(
        f'<text x="18" y="{top + plot_h / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13" transform="rotate(-90 18 {top + plot_h / 2:.1f})">{escape(y_label)}</text>'
    )

    legend = ['<g class="legend" font-family="sans-serif" font-size="13">']
    for i, (name, values) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, values))
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="2" '
            f'data-label={quoteattr(name)} points="{points}"/>'
        )
        ly = top + 10 + 22 * i
        lx = left + plot_w + 20
        legend.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" stroke-width="3"/>')
        legend.append(f'<text x="{lx + 30}" y="{ly + 4}">{escape(name)}</text>')
    legend.append("</g>")
    out += legend
    out.append("</svg>")
    return "\n".join(out) + "\n"
