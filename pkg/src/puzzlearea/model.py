"""Closed-form unassembled area of a jigsaw puzzle.

Each piece is treated as a square of area ``A_a / N`` whose circumscribed
circle (diameter = square diagonal) sits on a hexagonal lattice. Every
piece then claims one third of a hexagon of edge ``d``, and the total
spread area collapses to ``sqrt(3) * A_a`` whatever the piece count.

All lengths are in cm and all areas in cm².
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError

SQRT3 = math.sqrt(3.0)

_DIMS_RTOL = 1e-9


def _check_positive(name, value):
    if not (isinstance(value, numbers.Real) and math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")


def _check_pieces(pieces):
    if isinstance(pieces, bool) or not isinstance(pieces, numbers.Integral) or pieces < 1:
        raise DomainError(f"pieces must be an integer >= 1, got {pieces!r}")


@dataclass(frozen=True)
class PuzzleSpec:
    """Piece count plus assembled footprint.

    Give either ``assembled_area`` or both ``assembled_width`` and
    ``assembled_height``. When all three are given they must agree.
    """

    pieces: int
    assembled_area: Optional[float] = None
    assembled_width: Optional[float] = None
    assembled_height: Optional[float] = None

    def __post_init__(self):
        _check_pieces(self.pieces)
        w, h = self.assembled_width, self.assembled_height
        if (w is None) != (h is None):
            raise DomainError("assembled_width and assembled_height must be given together")
        if w is not None:
            _check_positive("assembled_width", w)
            _check_positive("assembled_height", h)
            product = w * h
            if self.assembled_area is None:
                object.__setattr__(self, "assembled_area", product)
            else:
                _check_positive("assembled_area", self.assembled_area)
                if abs(self.assembled_area - product) > _DIMS_RTOL * product:
                    raise DomainError(
                        f"assembled_area {self.assembled_area} disagrees with "
                        f"width*height {product}"
                    )
        elif self.assembled_area is None:
            raise DomainError("need assembled_area or assembled_width and assembled_height")
        else:
            _check_positive("assembled_area", self.assembled_area)

    @classmethod
    def from_dims(cls, pieces, width, height):
        return cls(pieces=pieces, assembled_width=width, assembled_height=height)


@dataclass(frozen=True)
class ModelBreakdown:
    piece_area: float
    piece_edge: float
    circle_diameter: float
    hexagon_area: float
    per_piece_spread_area: float
    unassembled_area: float

    def as_dict(self):
        return {
            "piece_area": self.piece_area,
            "piece_edge": self.piece_edge,
            "circle_diameter": self.circle_diameter,
            "hexagon_area": self.hexagon_area,
            "per_piece_spread_area": self.per_piece_spread_area,
            "unassembled_area": self.unassembled_area,
        }


@dataclass(frozen=True)
class TableFit:
    fits: bool
    table_area: float
    required_area: float
    margin: float


def piece_area(assembled_area: float, pieces: int) -> float:
    _check_positive("assembled_area", assembled_area)
    _check_pieces(pieces)
    return assembled_area / pieces


def circumscribed_diameter(assembled_area: float, pieces: int) -> float:
    """Diagonal of the square piece, i.e. ``sqrt(2 * A_a / N)``."""
    return math.sqrt(2.0 * piece_area(assembled_area, pieces))


def hexagon_area(diameter: float) -> float:
    """Area of a regular hexagon whose edge equals ``diameter``."""
    _check_positive("diameter", diameter)
    return 1.5 * SQRT3 * diameter * diameter


def per_piece_spread_area(diameter: float) -> float:
    """One third of the hexagon cell: the floor area claimed by one piece."""
    return hexagon_area(diameter) / 3.0


def unassembled_area(assembled_area: float) -> float:
    # Piece count deliberately absent: it cancels out of the derivation.
    _check_positive("assembled_area", assembled_area)
    return SQRT3 * assembled_area


def model_breakdown(spec: PuzzleSpec) -> ModelBreakdown:
    area, n = spec.assembled_area, spec.pieces
    a_p = piece_area(area, n)
    d = circumscribed_diameter(area, n)
    a_h = hexagon_area(d)
    return ModelBreakdown(
        piece_area=a_p,
        piece_edge=math.sqrt(a_p),
        circle_diameter=d,
        hexagon_area=a_h,
        per_piece_spread_area=a_h / 3.0,
        unassembled_area=unassembled_area(area),
    )


def table_fits(spec: PuzzleSpec, table_width: float, table_height: float) -> TableFit:
    """Check whether a table can hold every piece laid flat in one layer.

    ``margin`` is the table area minus the predicted spread area and is
    negative when the table is too small.
    """
    _check_positive("table_width", table_width)
    _check_positive("table_height", table_height)
    table = table_width * table_height
    need = unassembled_area(spec.assembled_area)
    return TableFit(fits=table >= need, table_area=table, required_area=need, margin=table - need)
