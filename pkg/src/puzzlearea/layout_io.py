"""Layout export: CSV of piece poses and an SVG picture."""

from __future__ import annotations

import csv
import io

import numpy as np

from .errors import DataError
from .geometry import convex_hull
from .packing import Layout

LAYOUT_HEADER = ("idx", "cx_cm", "cy_cm", "edge_cm", "rot_rad")


def layout_csv(layout: Layout) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(LAYOUT_HEADER)
    for i, ((x, y), t) in enumerate(zip(layout.centers.tolist(), layout.rotations.tolist())):
        w.writerow([i, repr(x), repr(y), repr(layout.piece_edge), repr(t)])
    return buf.getvalue()


def read_layout_csv(text: str, strategy="imported") -> Layout:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != LAYOUT_HEADER:
        raise DataError(f"expected header {','.join(LAYOUT_HEADER)}", 1)
    centers, rots, edges = [], [], set()
    for line, row in enumerate(rows[1:], start=2):
        try:
            _, x, y, e, t = row
            centers.append((float(x), float(y)))
            rots.append(float(t))
            edges.add(float(e))
        except ValueError:
            raise DataError("malformed layout row", line) from None
    if len(edges) != 1:
        raise DataError("all pieces must share one edge length")
    return Layout(np.array(centers), np.array(rots), edges.pop(), strategy)


def layout_svg(layout: Layout, size_px: int = 600, margin_px: int = 10) -> str:
    """Pieces as rotated rectangles plus the dashed convex hull of their corners."""
    corners = layout.corners().reshape(-1, 2)
    lo = corners.min(axis=0)
    hi = corners.max(axis=0)
    span = float(max(hi - lo))
    scale = (size_px - 2 * margin_px) / span

    def px(x, y):
        return margin_px + (x - lo[0]) * scale, size_px - margin_px - (y - lo[1]) * scale

    e = layout.piece_edge * scale
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size_px}" height="{size_px}" '
        f'viewBox="0 0 {size_px} {size_px}">',
        f'<rect x="0" y="0" width="{size_px}" height="{size_px}" fill="white"/>',
        '<g id="pieces" fill="#d9b38c" stroke="#5a3d1e" stroke-width="0.5">',
    ]
    for (x, y), t in zip(layout.centers.tolist(), layout.rotations.tolist()):
        cx, cy = px(x, y)
        # y is flipped on screen, so the rotation sense flips too
        out.append(
            f'<rect x="{cx - e / 2:.3f}" y="{cy - e / 2:.3f}" width="{e:.3f}" height="{e:.3f}" '
            f'transform="rotate({-np.degrees(t):.4f} {cx:.3f} {cy:.3f})"/>'
        )
    out.append("</g>")
    if len(layout) >= 1:
        hull = convex_hull(corners).vertices
        pts = [px(x, y) for x, y in hull.tolist()]
        pts.append(pts[0])
        path = " ".join(f"{a:.3f},{b:.3f}" for a, b in pts)
        out.append(
            f'<polyline id="hull" points="{path}" fill="none" stroke="black" '
            f'stroke-width="1" stroke-dasharray="6,4"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
