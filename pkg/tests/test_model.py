import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from puzzlearea import (
    DomainError,
    PuzzleSpec,
    circumscribed_diameter,
    hexagon_area,
    model_breakdown,
    per_piece_spread_area,
    piece_area,
    table_fits,
    unassembled_area,
)

SQRT3 = math.sqrt(3)
ROW1_AREA = 50.2 * 69.0  # 3463.80


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.mark.parametrize(
    "area, n, expected, tol",
    [(100, 1, 100, 0), (100, 4, 25, 0), (3463.80, 1008, 3.43631, 1e-5)],
)
def test_piece_area(area, n, expected, tol):
    assert piece_area(area, n) == pytest.approx(expected, abs=tol)


@pytest.mark.parametrize("area, n", [(0, 1), (-1, 3), (10, 0), (float("nan"), 2)])
def test_piece_area_domain(area, n):
    with pytest.raises(DomainError):
        piece_area(area, n)


def test_circumscribed_diameter():
    assert circumscribed_diameter(2, 1) == 2
    assert circumscribed_diameter(1, 2) == 1
    # sqrt(2 * 3.43631) by hand: 2.621568
    assert circumscribed_diameter(3463.80, 1008) == pytest.approx(2.621568, abs=1e-6)
    assert circumscribed_diameter(7.0, 3) == pytest.approx(math.sqrt(7.0 / 3) * math.sqrt(2), rel=1e-15)


def test_hexagon_area():
    assert hexagon_area(1) == pytest.approx(2.5980762, abs=1e-7)
    assert hexagon_area(2) == pytest.approx(10.3923048, abs=1e-7)
    # (3 sqrt(3) / 2) * 2.62156**2 = 17.85548
    assert hexagon_area(2.62156) == pytest.approx(17.85548, abs=1e-5)
    with pytest.raises(DomainError):
        hexagon_area(-1)


def test_per_piece_spread_area():
    assert per_piece_spread_area(1) == pytest.approx(0.8660254, abs=1e-7)
    # 17.85548 / 3
    assert per_piece_spread_area(2.62156) == pytest.approx(5.95183, abs=1e-5)
    with pytest.raises(DomainError):
        per_piece_spread_area(0)


def test_unassembled_area():
    assert unassembled_area(1) == pytest.approx(1.7320508, abs=1e-7)
    assert unassembled_area(100) == pytest.approx(173.20508, abs=1e-5)
    assert unassembled_area(ROW1_AREA) == pytest.approx(5999.4776, abs=1e-4)
    with pytest.raises(DomainError):
        unassembled_area(0)


def test_unassembled_area_takes_no_piece_count():
    with pytest.raises(TypeError):
        unassembled_area(1.0, 5)


def test_spec_from_dims_and_cross_validation():
    spec = PuzzleSpec.from_dims(1008, 50.2, 69.0)
    assert spec.assembled_area == pytest.approx(3463.80, rel=1e-12)
    PuzzleSpec(1008, assembled_area=3463.8, assembled_width=50.2, assembled_height=69.0)
    with pytest.raises(DomainError):
        PuzzleSpec(1008, assembled_area=3500, assembled_width=50.2, assembled_height=69.0)
    with pytest.raises(DomainError):
        PuzzleSpec(10, assembled_width=3.0)
    with pytest.raises(DomainError):
        PuzzleSpec(0, assembled_area=1.0)
    with pytest.raises(DomainError):
        PuzzleSpec(5)


def test_breakdown_single_piece():
    bd = model_breakdown(PuzzleSpec(1, assembled_area=2))
    assert bd.piece_area == 2
    assert bd.piece_edge == pytest.approx(1.41421, abs=1e-5)
    assert bd.circle_diameter == pytest.approx(2)
    assert bd.hexagon_area == pytest.approx(10.39230, abs=1e-5)
    assert bd.per_piece_spread_area == pytest.approx(3.46410, abs=1e-5)
    assert bd.unassembled_area == pytest.approx(3.46410, abs=1e-5)


def test_breakdown_table_rows():
    bd = model_breakdown(PuzzleSpec.from_dims(1008, 50.2, 69.0))
    assert bd.piece_area == pytest.approx(3.43631, abs=1e-5)
    assert bd.circle_diameter == pytest.approx(2.62157, abs=1e-5)
    assert bd.unassembled_area == pytest.approx(5999.48, abs=1e-2)
    bd7 = model_breakdown(PuzzleSpec.from_dims(2000, 99.1, 68.6))
    assert bd7.unassembled_area == pytest.approx(11774.9, abs=0.05)


def test_table_fits():
    one = PuzzleSpec(1, assembled_area=1)
    fit = table_fits(one, 2, 1)
    assert fit.fits and fit.margin == pytest.approx(2 - SQRT3, abs=1e-12)
    fit = table_fits(one, 1, 1)
    assert not fit.fits and fit.margin == pytest.approx(1 - SQRT3, abs=1e-12)
    fit = table_fits(PuzzleSpec(1008, assembled_area=3463.80), 90, 70)
    assert fit.fits and fit.margin == pytest.approx(6300 - SQRT3 * 3463.80, abs=1e-9)
    assert fit.margin == pytest.approx(300.52, abs=0.01)
    with pytest.raises(DomainError):
        table_fits(one, 0, 1)


areas = st.floats(min_value=1e-3, max_value=1e7, allow_nan=False, allow_infinity=False)
counts = st.integers(min_value=1, max_value=10**6)


@given(area=areas, n1=counts, n2=counts)
def test_n_independence_is_bitwise(area, n1, n2):
    a = model_breakdown(PuzzleSpec(n1, assembled_area=area)).unassembled_area
    b = model_breakdown(PuzzleSpec(n2, assembled_area=area)).unassembled_area
    assert a == b


@given(area=areas)
def test_exact_constant(area):
    assert rel(unassembled_area(area) / area, SQRT3) <= 1e-12


@settings(max_examples=300)
@given(area=areas, n=counts)
def test_chain_reproduces_closed_form(area, n):
    d = circumscribed_diameter(area, n)
    assert rel(n * per_piece_spread_area(d), SQRT3 * area) <= 1e-12


@given(area=areas, n=counts)
def test_breakdown_invariants(area, n):
    bd = model_breakdown(PuzzleSpec(n, assembled_area=area))
    assert bd.piece_area == area / n
    assert rel(bd.hexagon_area, 3 * bd.per_piece_spread_area) <= 1e-12
    assert rel(bd.unassembled_area, n * bd.per_piece_spread_area) <= 1e-12
    assert rel(bd.circle_diameter, bd.piece_edge * math.sqrt(2)) <= 1e-12


@given(a=areas, b=areas)
def test_linearity(a, b):
    assert rel(unassembled_area(a + b), unassembled_area(a) + unassembled_area(b)) <= 1e-12
