import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from puzzlearea import DegenerateInputError, DomainError
from puzzlearea.geometry import (
    OrientedSquare,
    Polygon,
    contains_points,
    convex_hull,
    ellipse_area,
    normalize_rotation,
    polygon_area,
    principal_extents,
    rectangle_area,
    squares_overlap,
)
from puzzlearea.model import hexagon_area
from puzzlearea.packing import hex_layout

SAMPLES = 401


def sample_grid(sq, n=SAMPLES):
    """n x n points covering the closed square, in world coordinates."""
    t = np.linspace(-sq.edge / 2, sq.edge / 2, n)
    gx, gy = np.meshgrid(t, t)
    c, s = math.cos(sq.rotation), math.sin(sq.rotation)
    x = sq.center.x + gx * c - gy * s
    y = sq.center.y + gx * s + gy * c
    return np.column_stack([x.ravel(), y.ravel()])


def strictly_inside(sq, pts):
    c, s = math.cos(sq.rotation), math.sin(sq.rotation)
    dx, dy = pts[:, 0] - sq.center.x, pts[:, 1] - sq.center.y
    lx = dx * c + dy * s
    ly = -dx * s + dy * c
    h = sq.edge / 2
    return (np.abs(lx) < h) & (np.abs(ly) < h)


def sampled_overlap(a, b):
    """Positive-area overlap oracle: some sample of one square lies in the other's interior."""
    return bool(strictly_inside(b, sample_grid(a)).any() or strictly_inside(a, sample_grid(b)).any())


def sat_margin(a, b):
    """Smallest projected interpenetration over the four edge normals (negative = gap)."""
    worst = math.inf
    for base in (a.rotation, b.rotation):
        for ang in (base, base + math.pi / 2):
            n = np.array([math.cos(ang), math.sin(ang)])
            pa = a.corners() @ n
            pb = b.corners() @ n
            worst = min(worst, min(pa.max(), pb.max()) - max(pa.min(), pb.min()))
    return worst


def test_normalize_rotation():
    assert normalize_rotation(0.0) == 0.0
    assert normalize_rotation(math.pi / 2) == pytest.approx(0.0, abs=1e-15)
    assert normalize_rotation(-0.1) == pytest.approx(math.pi / 2 - 0.1)
    assert 0 <= OrientedSquare((0, 0), 1, 7.0).rotation < math.pi / 2


def test_square_rejects_bad_edge():
    with pytest.raises(DomainError):
        OrientedSquare((0, 0), 0)


def test_overlap_examples():
    a = OrientedSquare((0, 0), 1)
    assert squares_overlap(a, a)
    assert not squares_overlap(a, OrientedSquare((2, 0), 1))
    assert not squares_overlap(a, OrientedSquare((1.0 + 1e-6, 0), 1))
    assert squares_overlap(a, OrientedSquare((0.9, 0), 1))


def test_overlap_examples_agree_with_sampling():
    a = OrientedSquare((0, 0), 1)
    assert not sampled_overlap(a, OrientedSquare((1.0 + 1e-6, 0), 1))
    assert sampled_overlap(a, OrientedSquare((0.9, 0), 1))


def test_touching_is_not_overlap():
    a = OrientedSquare((0, 0), 1)
    assert not squares_overlap(a, OrientedSquare((1.0, 0), 1))
    assert not squares_overlap(a, OrientedSquare((1.0, 1.0), 1))
    # corner-to-corner contact of two diamonds
    d = OrientedSquare((0, 0), 1, math.pi / 4)
    assert not squares_overlap(d, OrientedSquare((math.sqrt(2), 0), 1, math.pi / 4))
    assert squares_overlap(d, OrientedSquare((math.sqrt(2) - 1e-6, 0), 1, math.pi / 4))


def test_overlap_matches_grid_oracle_on_random_pairs():
    rng = np.random.default_rng(20240601)
    checked = 0
    for _ in range(1000):
        a = OrientedSquare(tuple(rng.uniform(-1, 1, 2)), rng.uniform(0.5, 1.5), rng.uniform(0, math.pi / 2))
        b = OrientedSquare(tuple(rng.uniform(-1, 1, 2)), rng.uniform(0.5, 1.5), rng.uniform(0, math.pi / 2))
        if abs(sat_margin(a, b)) < 1e-6:
            continue
        checked += 1
        assert squares_overlap(a, b) == sampled_overlap(a, b), (a, b)
        assert squares_overlap(a, b) == squares_overlap(b, a)
    assert checked > 990


squares = st.builds(
    OrientedSquare,
    st.tuples(st.floats(-3, 3), st.floats(-3, 3)),
    st.floats(0.1, 3),
    st.floats(0, 2 * math.pi),
)


@given(a=squares, b=squares)
def test_overlap_symmetric(a, b):
    assert squares_overlap(a, b) == squares_overlap(b, a)


def test_hull_drops_interior_point():
    hull = convex_hull([(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)])
    assert len(hull) == 4
    assert polygon_area(hull) == 1


def test_hull_of_hexagon_is_itself():
    hexagon = [(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)) for k in range(6)]
    hull = convex_hull(hexagon)
    assert len(hull) == 6
    got = {tuple(np.round(v, 12)) for v in hull.vertices}
    assert got == {tuple(np.round(v, 12)) for v in hexagon}


def test_hull_drops_collinear_points():
    pts = [(0, 0), (1, 0), (2, 0), (2, 2), (1, 2), (0, 2), (0, 1), (2, 1)]
    assert len(convex_hull(pts)) == 4


def test_hull_degenerate_inputs():
    with pytest.raises(DegenerateInputError):
        convex_hull([(0, 0), (1, 1)])
    with pytest.raises(DegenerateInputError):
        convex_hull([(0, 0), (1, 1), (2, 2), (3, 3)])
    with pytest.raises(DegenerateInputError):
        convex_hull([(1, 1)] * 5)


def test_hull_random_disk():
    rng = np.random.default_rng(12345)
    r = np.sqrt(rng.random(1000))
    t = rng.uniform(0, 2 * math.pi, 1000)
    pts = np.column_stack([r * np.cos(t), r * np.sin(t)])
    hull = convex_hull(pts)
    area = polygon_area(hull)
    assert math.pi * 0.95 < area < math.pi
    assert contains_points(hull, pts).all()
    assert np.all(np.diff(np.unwrap(np.arctan2(*(hull.vertices - hull.vertices.mean(0)).T[::-1]))) > 0)


def brute_force_hull_vertices(pts):
    """Vertices i for which some directed edge (i, j) has every other point strictly to its left."""
    out = set()
    for i, j in itertools.permutations(range(len(pts)), 2):
        d = pts[j] - pts[i]
        rest = np.delete(pts, [i, j], axis=0) - pts[i]
        if np.all(d[0] * rest[:, 1] - d[1] * rest[:, 0] > 0):
            out.update((i, j))
    return out


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(3, 25))
def test_hull_matches_brute_force(seed, n):
    pts = np.random.default_rng(seed).normal(size=(n, 2))
    hull = convex_hull(pts)
    expected = {tuple(pts[i]) for i in brute_force_hull_vertices(pts)}
    assert {tuple(v) for v in hull.vertices} == expected
    assert contains_points(hull, pts).all()


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(6, 60))
def test_hull_area_monotone_in_subset(seed, n):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1, 1, size=(n, 2))
    sub = pts[: max(3, n // 2)]
    assert polygon_area(convex_hull(pts)) >= polygon_area(convex_hull(sub)) - 1e-12


def fan_area(verts):
    """Triangle-fan area using Heron's formula; no cross products."""
    total = 0.0
    for k in range(1, len(verts) - 1):
        a = np.linalg.norm(verts[k] - verts[0])
        b = np.linalg.norm(verts[k + 1] - verts[k])
        c = np.linalg.norm(verts[0] - verts[k + 1])
        s = (a + b + c) / 2
        total += math.sqrt(max(s * (s - a) * (s - b) * (s - c), 0.0))
    return total


def test_polygon_area_examples():
    assert polygon_area([(0, 0), (1, 0), (1, 1), (0, 1)]) == 1
    assert polygon_area([(0, 0), (4, 0), (0, 3)]) == 6
    hexagon = [(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)) for k in range(6)]
    assert polygon_area(hexagon) == pytest.approx(2.5980762, abs=1e-7)
    assert polygon_area(hexagon) == pytest.approx(hexagon_area(1.0), rel=1e-12)
    with pytest.raises(DomainError):
        polygon_area([(0, 0), (1, 1), (2, 2)])


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_polygon_area_matches_fan(seed):
    pts = np.random.default_rng(seed).normal(size=(30, 2))
    hull = convex_hull(pts)
    assert polygon_area(hull) == pytest.approx(fan_area(hull.vertices), rel=1e-9)


def test_polygon_requires_three_vertices():
    with pytest.raises(DegenerateInputError):
        Polygon(np.zeros((2, 2)))


CROSS = np.array([(1, 0), (-1, 0), (0, 0.5), (0, -0.5)], dtype=float)


def rotate(pts, ang):
    c, s = math.cos(ang), math.sin(ang)
    return pts @ np.array([[c, s], [-s, c]])


def test_extents_cross():
    e = principal_extents(CROSS, 0)
    assert e.major == pytest.approx(2)
    assert e.minor == pytest.approx(1)
    assert e.major_axis_direction == pytest.approx((1, 0))


def test_extents_cross_rotated():
    ang = math.radians(30)
    e = principal_extents(rotate(CROSS, ang), 0)
    assert e.major == pytest.approx(2)
    assert e.minor == pytest.approx(1)
    assert e.major_axis_direction == pytest.approx((math.cos(ang), math.sin(ang)))


def test_extents_pad():
    e = principal_extents(CROSS, 0.25)
    assert (e.major, e.minor) == pytest.approx((2.5, 1.5))


def test_extents_hex_cluster():
    # 18 full rings: 36 d corner to corner, 18 sqrt(3) d across flats
    centers = hex_layout(1027, 1.0).centers
    e = principal_extents(centers, 0.5)
    assert e.major == pytest.approx(36 + 1, rel=1e-9)
    assert e.minor == pytest.approx(18 * math.sqrt(3) + 1, rel=1e-9)


def test_extents_square_cluster_uses_sides():
    pts = np.array([(x, y) for x in range(5) for y in range(5)], dtype=float)
    for ang in (0.0, 0.3, 1.0):
        e = principal_extents(rotate(pts, ang), 0)
        assert (e.major, e.minor) == pytest.approx((4, 4), rel=1e-9)


def test_extents_degenerate():
    with pytest.raises(DegenerateInputError):
        principal_extents([(1, 1), (1, 1), (1, 1)], 0)
    with pytest.raises(DegenerateInputError):
        principal_extents([(1, 1)], 0)
    with pytest.raises(DegenerateInputError):
        principal_extents([(0, 0), (1, 1), (2, 2)], 0)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), ang=st.floats(0, 2 * math.pi))
def test_extents_rotation_invariant(seed, ang):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(50, 2)) * (3.0, 1.0)
    a = principal_extents(pts, 0.2)
    b = principal_extents(rotate(pts, ang), 0.2)
    assert b.major == pytest.approx(a.major, rel=1e-9)
    assert b.minor == pytest.approx(a.minor, rel=1e-9)


def test_ellipse_and_rectangle_examples():
    assert ellipse_area(2, 2) == pytest.approx(math.pi)
    assert ellipse_area(83.0, 85.0) == pytest.approx(5540.98, abs=0.005)
    assert ellipse_area(25.9, 23.3) == pytest.approx(473.96, abs=0.005)
    assert rectangle_area(1, 1) == 1
    assert rectangle_area(112.0, 69.0) == pytest.approx(7728.0)
    assert rectangle_area(132.4, 57.5) == pytest.approx(7613.0)
    for f in (ellipse_area, rectangle_area):
        with pytest.raises(DomainError):
            f(0, 1)


@given(x=st.floats(1e-3, 1e4), y=st.floats(1e-3, 1e4))
def test_ellipse_rectangle_ratio(x, y):
    assert ellipse_area(x, y) / rectangle_area(x, y) == pytest.approx(math.pi / 4, rel=1e-12)
