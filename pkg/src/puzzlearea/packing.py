"""Layouts of unassembled pieces and their measured spread.

Three strategies are provided:

* ``hex``: circumscribed circles on a hexagonal lattice, the arrangement the
  closed-form model assumes.
* ``greedy-radial``: loose random placement. Each piece gets a random
  rotation and a fan of random directions; along each direction the piece
  marches outward from the origin until it first fits, and the closest
  such spot wins.
* ``grid``: axis-aligned squares on a square grid, the over-careful
  arrangement that defeats the circular-piece assumption.

Randomness comes from ``numpy.random.default_rng(seed)`` (PCG64 seeded via
``SeedSequence``), so a layout is reproducible bit for bit from its seed.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError
from .geometry import (
    HALF_PI,
    OrientedSquare,
    SpreadExtents,
    convex_hull,
    ellipse_area,
    polygon_area,
    principal_extents,
    sat_overlap,
    square_corners,
)
from .spatial import SpatialHash

STRATEGIES = ("hex", "greedy-radial", "grid")

SQRT2 = math.sqrt(2.0)

# Axial hex directions, in the order a ring is walked.
_HEX_DIRS = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))

_JITTER_ATTEMPTS = 256


@dataclass(frozen=True)
class SimParams:
    strategy: str = "greedy-radial"
    seed: int = 0
    candidate_angles: int = 64
    radial_step: float = 0.05
    jitter: float = 0.0
    gap: float = 0.0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise DomainError(f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}")
        if not (0 <= int(self.seed) < 2**64):
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.candidate_angles < 1:
            raise DomainError("candidate_angles must be >= 1")
        if not self.radial_step > 0:
            raise DomainError("radial_step must be positive")
        if not 0 <= self.jitter < 1:
            raise DomainError("jitter must lie in [0, 1)")
        if not self.gap >= 0:
            raise DomainError("gap must be >= 0")


@dataclass(frozen=True)
class Layout:
    """Equal squares laid flat; ``centers`` is (n, 2), ``rotations`` is (n,)."""

    centers: np.ndarray
    rotations: np.ndarray
    piece_edge: float
    strategy: str
    seed: Optional[int] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.ascontiguousarray(self.centers, dtype=float).reshape(-1, 2)
        r = np.ascontiguousarray(self.rotations, dtype=float).reshape(-1)
        if len(c) < 1 or len(c) != len(r):
            raise DomainError("layout needs >= 1 piece and one rotation per centre")
        c.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "rotations", r)

    def __len__(self):
        return len(self.centers)

    @property
    def diameter(self):
        return self.piece_edge * SQRT2

    @property
    def pieces(self):
        return [
            OrientedSquare((float(x), float(y)), self.piece_edge, float(t))
            for (x, y), t in zip(self.centers, self.rotations)
        ]

    def corners(self) -> np.ndarray:
        return square_corners(self.centers, self.piece_edge, self.rotations)

    def fingerprint(self) -> bytes:
        return self.centers.tobytes() + self.rotations.tobytes()


def hex_sites(count):
    """First ``count`` sites of a unit hex lattice, ring by ring from the origin.

    Returned in axial coordinates ``(q, r)``; ring ``k`` holds ``6k`` sites.
    """
    out = [(0, 0)]
    k = 1
    while len(out) < count:
        q, r = k * _HEX_DIRS[4][0], k * _HEX_DIRS[4][1]
        for dq, dr in _HEX_DIRS:
            for _ in range(k):
                out.append((q, r))
                q, r = q + dq, r + dr
        k += 1
    return np.array(out[:count], dtype=float)


def _axial_to_xy(axial, spacing):
    q, r = axial[:, 0], axial[:, 1]
    return np.column_stack([spacing * (q + 0.5 * r), spacing * (math.sqrt(3.0) / 2) * r])


def _any_overlap(centers, rots, edge, cand, rot, neighbours):
    if len(neighbours) == 0:
        return False
    d = centers[neighbours] - cand
    return bool(np.any(sat_overlap(d[:, 0], d[:, 1], edge, rot, edge, rots[neighbours])))


def _overlapping(centers, rots, edge, i, grid):
    nb = [j for j in grid.query(*centers[i]) if j != i]
    if not nb:
        return []
    nb = np.array(nb, dtype=np.intp)
    d = centers[nb] - centers[i]
    return nb[sat_overlap(d[:, 0], d[:, 1], edge, rots[i], edge, rots[nb])].tolist()


def _jitter_in_place(centers, rots, edge, diameter, jitter, rng):
    radius = jitter * diameter * (1.0 - SQRT2 / 2.0)
    sites = centers.copy()
    grid = SpatialHash(diameter)
    for i in range(len(centers)):
        placed = False
        for attempt in range(_JITTER_ATTEMPTS):
            # crowded sites get a progressively smaller disk
            rr = radius * 0.5 ** (attempt // 32) * math.sqrt(rng.random())
            phi = 2.0 * math.pi * rng.random()
            centers[i] = sites[i] + (rr * math.cos(phi), rr * math.sin(phi))
            grid.insert(i, *centers[i])
            if not _overlapping(centers, rots, edge, i, grid):
                placed = True
                break
            grid.remove(i, *centers[i])
            rots[i] = rng.uniform(0.0, HALF_PI)
        if placed:
            continue
        # Out of draws: snap back to the lattice site, and snap back any
        # neighbour that now overlaps. Squares on their own sites never
        # interpenetrate, so the cascade ends.
        centers[i] = sites[i]
        grid.insert(i, *centers[i])
        stack = [i]
        while stack:
            k = stack.pop()
            for j in _overlapping(centers, rots, edge, k, grid):
                grid.remove(j, *centers[j])
                centers[j] = sites[j]
                grid.insert(j, *centers[j])
                stack.append(j)


def hex_layout(pieces: int, diameter: float, jitter: float = 0.0, seed: int = 0) -> Layout:
    """Squares inscribed in circles of ``diameter`` on a hexagonal lattice.

    Sites are filled ring by ring from the origin. Every square gets a
    uniform rotation in [0, pi/2). With ``jitter > 0`` each centre moves
    uniformly within a disk of radius ``jitter * diameter * (1 - sqrt(2)/2)``;
    a displacement that would make the piece overlap one already placed is
    redrawn together with its rotation, and the disk halves after every 32
    rejected draws. A piece that exhausts its draws returns to its lattice
    site, pulling any newly overlapping neighbours back to theirs.
    """
    if pieces < 1:
        raise DomainError("pieces must be >= 1")
    if not diameter > 0:
        raise DomainError("diameter must be positive")
    if not 0 <= jitter < 1:
        raise DomainError("jitter must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    edge = diameter / SQRT2
    centers = _axial_to_xy(hex_sites(pieces), diameter)
    rots = rng.uniform(0.0, HALF_PI, size=pieces)
    if jitter > 0:
        _jitter_in_place(centers, rots, edge, diameter, jitter, rng)
    return Layout(
        centers=centers,
        rotations=rots,
        piece_edge=edge,
        strategy="hex",
        seed=seed,
        params={"diameter": diameter, "jitter": jitter},
    )


class _BlockedRaster:
    """Conservative occupancy bitmap for the greedy packer.

    A pixel is marked only when every point inside it lies closer than half
    an edge to some placed square. A square centred there, whatever its
    rotation, holds a disk of that radius and so must interpenetrate the
    placed piece. Unmarked pixels still go through the exact test.
    """

    def __init__(self, half_extent, pixel, edge):
        self.pixel = pixel
        self.edge = edge
        self.n = int(math.ceil(2 * half_extent / pixel)) + 1
        self.origin = -0.5 * self.n * pixel
        self.bits = np.zeros((self.n, self.n), dtype=bool)
        self.reach = 0.5 * edge - pixel * SQRT2 / 2 - 1e-9 * edge
        w = int(math.ceil((edge * SQRT2 / 2 + max(self.reach, 0.0)) / pixel)) + 1
        self._off = np.arange(-w, w + 1)
        # Every pixel centred within ``rho`` of the origin is marked, except
        # the few listed in ``pockets``.
        self.rho = 0.0
        self.ring = 0.5 * edge
        self.pockets = np.empty((0, 2), dtype=np.int64)

    def index(self, xy):
        return np.floor((xy - self.origin) / self.pixel).astype(np.int64)

    def mark(self, x, y, rot):
        if self.reach <= 0:
            return
        ix, iy = self.index(np.array([x, y]))
        xs = ix + self._off
        ys = iy + self._off
        xs = xs[(xs >= 0) & (xs < self.n)]
        ys = ys[(ys >= 0) & (ys < self.n)]
        if len(xs) == 0 or len(ys) == 0:
            return
        px = (self.origin + (xs + 0.5) * self.pixel - x)[:, None]
        py = (self.origin + (ys + 0.5) * self.pixel - y)[None, :]
        c, s = math.cos(rot), math.sin(rot)
        h = 0.5 * self.edge
        # pixel centre in the square's frame, folded into the first quadrant
        qx = np.maximum(np.abs(px * c + py * s) - h, 0.0)
        qy = np.maximum(np.abs(-px * s + py * c) - h, 0.0)
        inside = qx * qx + qy * qy < self.reach * self.reach
        sub = self.bits[xs[0] : xs[-1] + 1, ys[0] : ys[-1] + 1]
        sub |= inside

    def _annulus(self, a, b):
        """Pixel indices whose centres lie at radius [a, b) from the origin."""
        px, o = self.pixel, self.origin
        iy = np.arange(
            max(0, int(math.floor((-b - o) / px)) - 1),
            min(self.n, int(math.ceil((b - o) / px)) + 2),
        )
        y = o + (iy + 0.5) * px
        outer = np.sqrt(np.maximum(b * b - y * y, 0.0))
        inner = np.sqrt(np.maximum(a * a - y * y, 0.0))
        spans = []
        for lo_x, hi_x in ((-outer, -inner), (inner, outer)):
            lo = np.clip(np.floor((lo_x - o) / px).astype(np.int64) - 1, 0, self.n)
            hi = np.clip(np.ceil((hi_x - o) / px).astype(np.int64) + 2, 0, self.n)
            spans.append((lo, np.maximum(hi - lo, 0)))
        lo = np.concatenate([spans[0][0], spans[1][0]])
        ln = np.concatenate([spans[0][1], spans[1][1]])
        rows = np.concatenate([iy, iy])
        total = int(ln.sum())
        if total == 0:
            return np.empty(0, np.int64), np.empty(0, np.int64)
        starts = np.repeat(lo - np.cumsum(ln) + ln, ln)
        ix = starts + np.arange(total)
        jy = np.repeat(rows, ln)
        r2 = (o + (ix + 0.5) * px) ** 2 + (o + (jy + 0.5) * px) ** 2
        keep = (r2 >= a * a) & (r2 < b * b)
        # the two half-row spans may meet near the y extremes
        key = np.unique(ix[keep] * self.n + jy[keep])
        return key // self.n, key % self.n

    def advance(self):
        """Grow ``rho`` across annuli that are marked save for a handful of pockets."""
        limit = 0.5 * self.n * self.pixel
        while self.rho + self.ring < limit:
            ix, iy = self._annulus(self.rho, self.rho + self.ring)
            open_ = ~self.bits[ix, iy]
            count = int(open_.sum())
            if count > max(8, 0.002 * len(ix)):
                break
            if count:
                new = np.column_stack([ix[open_], iy[open_]])
                self.pockets = np.concatenate([self.pockets, new])
            self.rho += self.ring
        if len(self.pockets):
            live = ~self.bits[self.pockets[:, 0], self.pockets[:, 1]]
            self.pockets = self.pockets[live]

    def inner_steps(self, step):
        """Number of leading steps ``k`` whose every candidate lies inside ``rho``."""
        slack = self.pixel * SQRT2 / 2
        k = max(0, int(math.ceil((self.rho - slack) / step)))
        while k > 0 and (k - 1) * step + slack >= self.rho:
            k -= 1
        return k

    def pocket_candidates(self, u, step, k_in):
        """Candidate ``(k, j)`` pairs with ``k < k_in`` that land in a pocket, sorted."""
        if len(self.pockets) == 0 or k_in == 0:
            return np.empty(0, np.int64), np.empty(0, np.int64)
        centres = self.origin + (self.pockets + 0.5) * self.pixel
        t = centres @ u.T  # (P, m)
        base = np.floor(t / step).astype(np.int64)
        ks = base[:, :, None] + np.arange(-1, 3)[None, None, :]
        jj = np.broadcast_to(np.arange(u.shape[0])[None, :, None], ks.shape)
        pp = np.broadcast_to(np.arange(len(self.pockets))[:, None, None], ks.shape)
        ok = (ks >= 0) & (ks < k_in)
        ks, jj, pp = ks[ok], jj[ok], pp[ok]
        pos = (ks * step)[:, None] * u[jj]
        idx = self.index(pos)
        hit = np.all(idx == self.pockets[pp], axis=1)
        key = np.unique(ks[hit] * u.shape[0] + jj[hit])
        return key // u.shape[0], key % u.shape[0]

    def blocked(self, xy):
        idx = self.index(xy)
        ok = np.all((idx >= 0) & (idx < self.n), axis=-1)
        out = np.zeros(idx.shape[:-1], dtype=bool)
        sel = idx[ok]
        out[ok] = self.bits[sel[:, 0], sel[:, 1]]
        return out


def _first_free(block, centers, rots, edge, rot, grid):
    """Index of the first candidate in ``block`` that overlaps nothing, or None."""
    nb = grid.query_many(block)
    if len(nb) == 0:
        return 0
    diff = centers[nb][None, :, :] - block[:, None, :]
    d2 = diff[..., 0] ** 2 + diff[..., 1] ** 2
    near = d2 < 2 * edge * edge  # circumscribed circles intersect
    hit = np.zeros(near.shape, dtype=bool)
    a, b = np.nonzero(near)
    if len(a):
        hit[a, b] = sat_overlap(diff[a, b, 0], diff[a, b, 1], edge, rot, edge, rots[nb[b]])
    free = np.flatnonzero(~hit.any(axis=1))
    return int(free[0]) if len(free) else None


def pack_random(pieces: int, edge: float, params: SimParams = SimParams()) -> Layout:
    """Greedy radial insertion of randomly rotated squares.

    For each piece: draw a rotation, then ``candidate_angles`` directions.
    Candidate centres sit at ``k * radial_step * d`` along each direction
    (``d`` the piece diagonal). The piece is committed at the candidate of
    smallest radius that overlaps nothing; ties go to the earlier-drawn
    direction. A spatial hash (cell ``d``) supplies the neighbours for the
    exact separating-axis test.
    """
    if pieces < 1:
        raise DomainError("pieces must be >= 1")
    if not edge > 0:
        raise DomainError("edge must be positive")
    d = edge * SQRT2
    step = params.radial_step * d
    m = params.candidate_angles
    rng = np.random.default_rng(params.seed)

    centers = np.zeros((pieces, 2))
    rots = np.zeros(pieces)
    grid = SpatialHash(d)
    half = d * (math.sqrt(pieces) + 3.0)
    raster = _BlockedRaster(half, max(0.05 * d, 2 * half / 4096), edge)
    r_max = 0.0
    steps_per_block = max(1, 1024 // m)

    for i in range(pieces):
        rot = rng.uniform(0.0, HALF_PI)
        phi = rng.uniform(0.0, 2.0 * math.pi, size=m)
        best = np.zeros(2) if i == 0 else None
        if i:
            # beyond r_max + d no placed piece can be reached
            k_max = int(math.floor((r_max + d) / step)) + 1
            u = np.column_stack([np.cos(phi), np.sin(phi)])
            k_in = min(raster.inner_steps(step), k_max + 1)
            pk, pj = raster.pocket_candidates(u, step, k_in)
            if len(pk):
                pts = (step * pk)[:, None] * u[pj]
                pts = pts[~raster.blocked(pts)]
                for c0 in range(0, len(pts), 128):
                    hit = _first_free(pts[c0 : c0 + 128], centers[:i], rots[:i], edge, rot, grid)
                    if hit is not None:
                        best = pts[c0 + hit]
                        break
            for k0 in range(k_in, k_max + 1, steps_per_block):
                if best is not None:
                    break
                radii = step * np.arange(k0, min(k0 + steps_per_block, k_max + 1))
                cand = radii[:, None, None] * u[None, :, :]
                open_k, open_j = np.nonzero(~raster.blocked(cand))
                if len(open_k) == 0:
                    continue
                pts = cand[open_k, open_j]
                for c0 in range(0, len(pts), 128):
                    hit = _first_free(pts[c0 : c0 + 128], centers[:i], rots[:i], edge, rot, grid)
                    if hit is not None:
                        best = pts[c0 + hit]
                        break
            if best is None:  # unreachable: the outermost step is always clear
                raise RuntimeError("no free position found")
        centers[i] = best
        rots[i] = rot
        grid.insert(i, best[0], best[1])
        raster.mark(best[0], best[1], rot)
        if i % 8 == 7:
            raster.advance()
        r_max = max(r_max, math.hypot(best[0], best[1]))

    return Layout(
        centers=centers,
        rotations=rots,
        piece_edge=edge,
        strategy="greedy-radial",
        seed=params.seed,
        params={"candidate_angles": m, "radial_step": params.radial_step},
    )


def pack_grid(pieces: int, edge: float, gap: float = 0.0) -> Layout:
    """Axis-aligned squares filling a ``ceil(sqrt(N))``-column grid row by row."""
    if pieces < 1:
        raise DomainError("pieces must be >= 1")
    if not edge > 0:
        raise DomainError("edge must be positive")
    if not gap >= 0:
        raise DomainError("gap must be >= 0")
    cols = math.isqrt(pieces - 1) + 1
    pitch = edge + gap
    idx = np.arange(pieces)
    centers = np.column_stack([(idx % cols) * pitch, (idx // cols) * pitch]).astype(float)
    return Layout(
        centers=centers,
        rotations=np.zeros(pieces),
        piece_edge=edge,
        strategy="grid",
        params={"gap": gap},
    )


def build_layout(pieces: int, assembled_area: float, params: SimParams) -> Layout:
    """Layout for a puzzle of ``pieces`` pieces and the given assembled area."""
    if not assembled_area > 0:
        raise DomainError("assembled_area must be positive")
    if pieces < 1:
        raise DomainError("pieces must be >= 1")
    edge = math.sqrt(assembled_area / pieces)
    if params.strategy == "hex":
        return hex_layout(pieces, edge * SQRT2, params.jitter, params.seed)
    if params.strategy == "grid":
        return pack_grid(pieces, edge, params.gap)
    return pack_random(pieces, edge, params)


@dataclass(frozen=True)
class SimResult:
    hull_area: float
    extents: SpreadExtents
    ellipse_area: float
    spread_ratio_hull: float
    spread_ratio_ellipse: float
    pieces: int
    seed: Optional[int]

    def as_dict(self):
        return {
            "seed": self.seed,
            "pieces": self.pieces,
            "hull_area": self.hull_area,
            "major": self.extents.major,
            "minor": self.extents.minor,
            "ellipse_area": self.ellipse_area,
            "spread_ratio_hull": self.spread_ratio_hull,
            "spread_ratio_ellipse": self.spread_ratio_ellipse,
        }


def measure_layout(layout: Layout, assembled_area: float) -> SimResult:
    """Spread area of a layout, both as its convex hull and as a measured oval.

    The oval is read off the piece corners along their principal axes and
    converted with the ellipse formula.
    """
    if not assembled_area > 0:
        raise DomainError("assembled_area must be positive")
    corners = layout.corners().reshape(-1, 2)
    hull = polygon_area(convex_hull(corners))
    ext = principal_extents(corners, pad=0.0)
    ell = ellipse_area(ext.major, ext.minor)
    return SimResult(
        hull_area=hull,
        extents=ext,
        ellipse_area=ell,
        spread_ratio_hull=hull / assembled_area,
        spread_ratio_ellipse=ell / assembled_area,
        pieces=len(layout),
        seed=layout.seed,
    )


def core_packing_fraction(layout: Layout, fraction: float = 0.5) -> float:
    """Piece area over hull area for the innermost ``fraction`` of pieces.

    Pieces are ranked by centre distance from the origin; stable sort keeps
    ties in placement order.
    """
    if not 0 < fraction <= 1:
        raise DomainError("fraction must lie in (0, 1]")
    r = np.hypot(layout.centers[:, 0], layout.centers[:, 1])
    keep = np.argsort(r, kind="stable")[: max(1, int(round(fraction * len(layout))))]
    corners = square_corners(layout.centers[keep], layout.piece_edge, layout.rotations[keep])
    hull = polygon_area(convex_hull(corners.reshape(-1, 2)))
    return len(keep) * layout.piece_edge**2 / hull


def count_overlaps(layout: Layout) -> int:
    """Brute-force O(N^2) audit: number of overlapping piece pairs."""
    c, r, e = layout.centers, layout.rotations, layout.piece_edge
    total = 0
    for i in range(len(c) - 1):
        d = c[i + 1 :] - c[i]
        total += int(np.count_nonzero(sat_overlap(d[:, 0], d[:, 1], e, r[i], e, r[i + 1 :])))
    return total


@dataclass(frozen=True)
class Summary:
    mean: float
    stddev: float
    min: float
    max: float


@dataclass(frozen=True)
class RatioStatistics:
    ellipse: Summary
    hull: Summary
    runs: int


def _summary(values):
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return Summary(statistics.fmean(values), sd, min(values), max(values))


def ratio_statistics(results) -> RatioStatistics:
    """Sample statistics of both spread ratios; stddev is 0 for a single run."""
    results = list(results)
    if not results:
        raise DomainError("need at least one result")
    return RatioStatistics(
        ellipse=_summary([r.spread_ratio_ellipse for r in results]),
        hull=_summary([r.spread_ratio_hull for r in results]),
        runs=len(results),
    )
