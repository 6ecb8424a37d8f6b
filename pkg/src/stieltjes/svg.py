"""Tiny deterministic SVG scatter plots (no plotting dependency)."""
from __future__ import annotations

from dataclasses import dataclass, field

WIDTH, HEIGHT, PAD = 640, 420, 50


@dataclass
class Series:
    label: str
    color: str
    points: list = field(default_factory=list)  # (x, y) floats
    line: bool = False


def _ticks(lo, hi, count=5):
    if hi == lo:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def render(series: list[Series], title: str, xlabel: str, ylabel: str) -> str:
    pts = [p for s in series for p in s.points]
    if not pts:
        raise ValueError("nothing to plot")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def X(x):
        return PAD + (x - x0) / (x1 - x0) * (WIDTH - 2 * PAD)

    def Y(y):
        return HEIGHT - PAD - (y - y0) / (y1 - y0) * (HEIGHT - 2 * PAD)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{PAD}" y1="{HEIGHT - PAD}" x2="{WIDTH - PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 12}" text-anchor="middle">{xlabel}</text>',
        f'<text x="14" y="{HEIGHT // 2}" text-anchor="middle" transform="rotate(-90 14 {HEIGHT // 2})">{ylabel}</text>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<text x="{X(t):.1f}" y="{HEIGHT - PAD + 15}" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<text x="{PAD - 5}" y="{Y(t) + 4:.1f}" text-anchor="end">{t:.4g}</text>')
    for i, s in enumerate(series):
        if s.line and len(s.points) > 1:
            path = " ".join(f"{X(x):.2f},{Y(y):.2f}" for x, y in s.points)
            out.append(f'<polyline points="{path}" fill="none" stroke="{s.color}"/>')
        else:
            for x, y in s.points:
                out.append(f'<circle cx="{X(x):.2f}" cy="{Y(y):.2f}" r="2" fill="{s.color}"/>')
        out.append(f'<text x="{WIDTH - PAD - 120}" y="{PAD + 14 * i}" fill="{s.color}">{s.label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
