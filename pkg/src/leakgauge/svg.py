"""Minimal self-contained SVG line chart for entropy curves."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape


def line_chart(
    points: Sequence[tuple[float, float]],
    title: str = "",
    x_label: str = "pattern length n",
    y_label: str = "entropy (bits)",
    width: int = 480,
    height: int = 320,
    marker: float | None = None,
) -> str:
    if not points:
        raise ValueError("nothing to plot")
    ml, mr, mt, mb = 56, 16, 32, 44
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, x1 = min(xs), max(xs)
    y0, y1 = 0.0, max(max(ys), 1e-9)
    if x0 == x1:
        x0, x1 = x0 - 1, x1 + 1
    pw, ph = width - ml - mr, height - mt - mb

    def sx(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return mt + ph - (y - y0) / (y1 - y0) * ph

    path = " ".join(f"{'M' if i == 0 else 'L'}{sx(x):.2f},{sy(y):.2f}" for i, (x, y) in enumerate(points))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>',
    ]
    for x in xs:
        parts.append(f'<text x="{sx(x):.2f}" y="{mt + ph + 16}" font-size="11" text-anchor="middle">{x:g}</text>')
    for i in range(5):
        y = y0 + (y1 - y0) * i / 4
        parts.append(f'<text x="{ml - 6}" y="{sy(y) + 4:.2f}" font-size="11" text-anchor="end">{y:.2f}</text>')
    if marker is not None:
        parts.append(f'<line x1="{sx(marker):.2f}" y1="{mt}" x2="{sx(marker):.2f}" y2="{mt + ph}" stroke="gray" stroke-dasharray="4 3"/>')
    parts.append(f'<path d="{path}" fill="none" stroke="steelblue" stroke-width="2"/>')
    for x, y in points:
        parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="steelblue"/>')
    parts.append(f'<text x="{ml + pw / 2}" y="{height - 8}" font-size="12" text-anchor="middle">{escape(x_label)}</text>')
    parts.append(
        f'<text x="14" y="{mt + ph / 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 14 {mt + ph / 2})">{escape(y_label)}</text>'
    )
    if title:
        parts.append(f'<text x="{width / 2}" y="20" font-size="14" text-anchor="middle">{escape(title)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
