"""2D primitives: oriented squares, convex hulls, areas and spread extents."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateInputError, DomainError

HALF_PI = 0.5 * math.pi

#: Projected interpenetration (cm) below which two squares count as touching.
OVERLAP_TOL = 1e-9


class Point2(NamedTuple):
    x: float
    y: float


def normalize_rotation(theta):
    """Fold an angle into [0, pi/2); a square looks the same every quarter turn."""
    r = math.fmod(theta, HALF_PI)
    if r < 0:
        r += HALF_PI
    if r >= HALF_PI:
        r = 0.0
    return r


@dataclass(frozen=True)
class OrientedSquare:
    center: Point2
    edge: float
    rotation: float = 0.0

    def __post_init__(self):
        if not (self.edge > 0 and math.isfinite(self.edge)):
            raise DomainError(f"edge must be positive, got {self.edge!r}")
        cx, cy = self.center
        if not (math.isfinite(cx) and math.isfinite(cy)):
            raise DomainError("center must be finite")
        object.__setattr__(self, "center", Point2(float(cx), float(cy)))
        object.__setattr__(self, "rotation", normalize_rotation(float(self.rotation)))

    def corners(self) -> np.ndarray:
        """The four corners, counter-clockwise, as a (4, 2) array."""
        return square_corners(
            np.array([self.center]), self.edge, np.array([self.rotation])
        )[0]


def square_corners(centers, edge, rotations):
    """Corners of many squares at once: returns shape (n, 4, 2), CCW per square."""
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    rotations = np.asarray(rotations, dtype=float).reshape(-1)
    h = 0.5 * edge
    c, s = np.cos(rotations), np.sin(rotations)
    local = np.array([[-h, -h], [h, -h], [h, h], [-h, h]])
    # rotate local offsets: (x c - y s, x s + y c)
    ox = local[None, :, 0] * c[:, None] - local[None, :, 1] * s[:, None]
    oy = local[None, :, 0] * s[:, None] + local[None, :, 1] * c[:, None]
    return np.stack([centers[:, None, 0] + ox, centers[:, None, 1] + oy], axis=-1)


def _support(edge, cos_rel, sin_rel):
    # half-width of a square's projection onto an axis at relative angle
    return 0.5 * edge * (np.abs(cos_rel) + np.abs(sin_rel))


def sat_overlap(dx, dy, edge_a, rot_a, edge_b, rot_b, tol=OVERLAP_TOL):
    """Vectorised separating-axis test between squares A and B.

    ``dx, dy`` is the centre offset B - A. All arguments broadcast. Returns
    a boolean array, True where the squares interpenetrate by more than
    ``tol`` on every one of the four candidate axes.
    """
    dx, dy = np.asarray(dx, float), np.asarray(dy, float)
    rot_a, rot_b = np.asarray(rot_a, float), np.asarray(rot_b, float)
    overlap = np.ones(np.broadcast(dx, dy, rot_a, rot_b).shape, dtype=bool)
    for base in (rot_a, rot_b):
        for extra in (0.0, HALF_PI):
            ang = base + extra
            ca, sa = np.cos(ang), np.sin(ang)
            dist = np.abs(dx * ca + dy * sa)
            ra = _support(edge_a, np.cos(ang - rot_a), np.sin(ang - rot_a))
            rb = _support(edge_b, np.cos(ang - rot_b), np.sin(ang - rot_b))
            overlap &= dist < ra + rb - tol
    return overlap


def squares_overlap(a: OrientedSquare, b: OrientedSquare) -> bool:
    """True iff the two squares intersect with positive area.

    Boundary contact, and interpenetration of at most ``OVERLAP_TOL`` on
    some axis, is not an overlap.
    """
    return bool(
        sat_overlap(
            b.center.x - a.center.x,
            b.center.y - a.center.y,
            a.edge,
            a.rotation,
            b.edge,
            b.rotation,
        )
    )


@dataclass(frozen=True)
class Polygon:
    """Simple polygon with counter-clockwise vertices, shape (k, 2)."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        if len(v) < 3:
            raise DegenerateInputError("a polygon needs at least 3 vertices")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return len(self.vertices)


def _as_points(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        pts = pts.reshape(-1, 2)
    if not np.all(np.isfinite(pts)):
        raise DomainError("point coordinates must be finite")
    return pts


def convex_hull(points) -> Polygon:
    """Andrew's monotone chain; collinear points are dropped from the output."""
    pts = _as_points(points)
    if len(pts) < 3:
        raise DegenerateInputError(f"need at least 3 points, got {len(pts)}")
    pts = np.unique(pts, axis=0)  # lexicographic sort by (x, y)
    if len(pts) < 3:
        raise DegenerateInputError("fewer than 3 distinct points")
    seq = [(float(x), float(y)) for x, y in pts]

    def chain(ordered):
        out = []
        for p in ordered:
            while len(out) >= 2:
                (ox, oy), (ax, ay) = out[-2], out[-1]
                if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= 0.0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = chain(seq)
    upper = chain(reversed(seq))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateInputError("all points are collinear")
    return Polygon(np.array(hull))


def signed_area(vertices) -> float:
    v = np.asarray(vertices, dtype=float).reshape(-1, 2)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def polygon_area(p) -> float:
    """Shoelace area of a simple polygon (a ``Polygon`` or a vertex sequence)."""
    verts = p.vertices if isinstance(p, Polygon) else np.asarray(p, dtype=float)
    if len(verts) < 3:
        raise DomainError("polygon needs at least 3 vertices")
    area = abs(signed_area(verts))
    if not area > 0:
        raise DomainError("degenerate polygon with zero area")
    return area


def contains_points(poly: Polygon, points, tol=1e-9) -> np.ndarray:
    """Point-in-convex-polygon test; points within ``tol`` of an edge count as inside."""
    pts = _as_points(points)
    v = poly.vertices
    w = np.roll(v, -1, axis=0)
    ex, ey = (w - v).T
    length = np.hypot(ex, ey)
    # signed distance to the left of each CCW edge; inside means >= -tol for all
    rel_x = pts[:, None, 0] - v[None, :, 0]
    rel_y = pts[:, None, 1] - v[None, :, 1]
    dist = (ex[None, :] * rel_y - ey[None, :] * rel_x) / length[None, :]
    return np.all(dist >= -tol, axis=1)


@dataclass(frozen=True)
class SpreadExtents:
    major: float
    minor: float
    major_axis_direction: tuple

    @property
    def minor_axis_direction(self):
        ux, uy = self.major_axis_direction
        return (-uy, ux)


def _canonical(u):
    ux, uy = float(u[0]), float(u[1])
    n = math.hypot(ux, uy)
    ux, uy = ux / n, uy / n
    if ux < -1e-15 or (abs(ux) <= 1e-15 and uy < 0):
        ux, uy = -ux, -uy
    return ux, uy


def _narrowest_normal(pts):
    # minimum caliper width is attained perpendicular to some hull edge
    hull = convex_hull(pts).vertices
    edges = np.roll(hull, -1, axis=0) - hull
    normals = np.column_stack([-edges[:, 1], edges[:, 0]])
    normals /= np.hypot(normals[:, 0], normals[:, 1])[:, None]
    proj = hull @ normals.T
    widths = proj.max(axis=0) - proj.min(axis=0)
    return normals[int(np.argmin(widths))]


def principal_extents(points, pad: float = 0.0) -> SpreadExtents:
    """Long and short axis of a point cloud, as a tape measure would read them.

    The axes are the principal components of the points; each extent is the
    peak-to-peak projection onto its axis plus ``2 * pad``. For isotropic
    clouds (equal covariance eigenvalues) PCA has no preferred axis; the
    short axis is then taken across the narrowest caliper width and the
    long axis perpendicular to it.
    """
    pts = _as_points(points)
    if len(pts) < 2:
        raise DegenerateInputError("need at least 2 points")
    if pad < 0:
        raise DomainError("pad must be >= 0")
    centered = pts - pts.mean(axis=0)
    if not np.any(np.abs(centered) > 0):
        raise DegenerateInputError("all points coincide")
    cov = centered.T @ centered / len(pts)
    evals, evecs = np.linalg.eigh(cov)
    lo, hi = float(evals[0]), float(evals[1])
    if hi - lo <= 1e-9 * hi:
        n = _narrowest_normal(pts)
        u = _canonical((-n[1], n[0]))
    else:
        u = _canonical(evecs[:, 1])
    v = (-u[1], u[0])
    proj_u = centered @ np.array(u)
    proj_v = centered @ np.array(v)
    a = float(np.ptp(proj_u)) + 2 * pad
    b = float(np.ptp(proj_v)) + 2 * pad
    if b > a:
        a, b = b, a
        u = _canonical(v)
    if not b > 0:
        raise DegenerateInputError("points are collinear; minor extent is zero")
    return SpreadExtents(major=a, minor=b, major_axis_direction=u)


def ellipse_area(x: float, y: float) -> float:
    """Area of the ellipse with full axes ``x`` and ``y``."""
    if not (x > 0 and y > 0):
        raise DomainError("ellipse axes must be positive")
    return 0.25 * math.pi * x * y


def rectangle_area(x: float, y: float) -> float:
    if not (x > 0 and y > 0):
        raise DomainError("rectangle sides must be positive")
    return x * y
