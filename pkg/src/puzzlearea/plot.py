"""Dependency-free SVG scatter plot of spread area against assembled area."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple
from xml.sax.saxutils import escape

from .errors import DomainError
from .model import SQRT3

MARGIN_LEFT = 90
MARGIN_RIGHT = 30
MARGIN_TOP = 30
MARGIN_BOTTOM = 70


@dataclass
class PlotSpec:
    points: List[Tuple[float, float, str]]
    width_px: int = 800
    height_px: int = 600
    reference_slope: float = SQRT3
    x_label: str = "Assembled area (cm²)"
    y_label: str = "Unassembled area (cm²)"
    x_max: float = field(init=False)
    y_max: float = field(init=False)

    def __post_init__(self):
        if self.width_px <= MARGIN_LEFT + MARGIN_RIGHT or self.height_px <= MARGIN_TOP + MARGIN_BOTTOM:
            raise DomainError("canvas too small")
        if not self.points:
            raise DomainError("nothing to plot")
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        if min(xs) < 0 or min(ys) < 0:
            raise DomainError("areas must be non-negative")
        self.x_max = nice_ceiling(max(xs) * 1.05)
        self.y_max = nice_ceiling(max(max(ys) * 1.05, self.reference_slope * self.x_max))

    @property
    def plot_width(self):
        return self.width_px - MARGIN_LEFT - MARGIN_RIGHT

    @property
    def plot_height(self):
        return self.height_px - MARGIN_TOP - MARGIN_BOTTOM

    def to_pixel(self, x, y):
        """Map data coordinates (cm²) to SVG pixel coordinates."""
        px = MARGIN_LEFT + x / self.x_max * self.plot_width
        py = MARGIN_TOP + self.plot_height - y / self.y_max * self.plot_height
        return px, py


def nice_ceiling(v):
    """Smallest of 1, 2, 2.5, 5 times a power of ten that is >= v."""
    if v <= 0:
        return 1.0
    exp = math.floor(math.log10(v))
    for m in (1, 2, 2.5, 5, 10):
        c = m * 10.0**exp
        if c >= v * (1 - 1e-12):
            return c
    return 10.0 ** (exp + 1)


def _f(v):
    return f"{v:.2f}"


def _ticks(top, count=5):
    return [top * k / count for k in range(count + 1)]


def render_svg(spec: PlotSpec) -> str:
    w, h = spec.width_px, spec.height_px
    x0, y0 = spec.to_pixel(0, 0)
    x1, y1 = spec.to_pixel(spec.x_max, spec.y_max)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
        f'<g id="axes" stroke="black" stroke-width="1">',
        f'<line x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x1)}" y2="{_f(y0)}"/>',
        f'<line x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x0)}" y2="{_f(y1)}"/>',
        "</g>",
        '<g id="ticks" font-size="11">',
    ]
    for t in _ticks(spec.x_max):
        px, _ = spec.to_pixel(t, 0)
        out.append(f'<line x1="{_f(px)}" y1="{_f(y0)}" x2="{_f(px)}" y2="{_f(y0 + 5)}" stroke="black"/>')
        out.append(f'<text x="{_f(px)}" y="{_f(y0 + 20)}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(spec.y_max):
        _, py = spec.to_pixel(0, t)
        out.append(f'<line x1="{_f(x0 - 5)}" y1="{_f(py)}" x2="{_f(x0)}" y2="{_f(py)}" stroke="black"/>')
        out.append(f'<text x="{_f(x0 - 8)}" y="{_f(py + 4)}" text-anchor="end">{t:g}</text>')
    out.append("</g>")
    cx = MARGIN_LEFT + spec.plot_width / 2
    cy = MARGIN_TOP + spec.plot_height / 2
    out.append(f'<text id="xlabel" x="{_f(cx)}" y="{_f(h - 20)}" text-anchor="middle">{escape(spec.x_label)}</text>')
    out.append(
        f'<text id="ylabel" x="20" y="{_f(cy)}" text-anchor="middle" '
        f'transform="rotate(-90 20 {_f(cy)})">{escape(spec.y_label)}</text>'
    )
    lx, ly = spec.to_pixel(spec.x_max, spec.reference_slope * spec.x_max)
    out.append(
        f'<line id="reference" x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(lx)}" y2="{_f(ly)}" '
        f'stroke="black" stroke-width="1.5" stroke-dasharray="8,5"/>'
    )
    out.append('<g id="points" fill="#1f77b4">')
    for x, y, label in spec.points:
        px, py = spec.to_pixel(x, y)
        out.append(f'<circle cx="{_f(px)}" cy="{_f(py)}" r="5"><title>{escape(str(label))}</title></circle>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def report_plot_spec(report, **kwargs) -> PlotSpec:
    points = [
        (row.assembled.value, row.unassembled.value, f"N={row.record.pieces}")
        for row in report.rows
    ]
    return PlotSpec(points=points, **kwargs)
