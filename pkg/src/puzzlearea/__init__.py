"""Floor area needed to lay out an unassembled jigsaw puzzle."""

from .errors import DataError, DegenerateInputError, DomainError
from .model import (
    SQRT3,
    ModelBreakdown,
    PuzzleSpec,
    circumscribed_diameter,
    hexagon_area,
    model_breakdown,
    per_piece_spread_area,
    piece_area,
    table_fits,
    unassembled_area,
)

__version__ = "0.1.0"

__all__ = [
    "SQRT3",
    "DataError",
    "DegenerateInputError",
    "DomainError",
    "ModelBreakdown",
    "PuzzleSpec",
    "circumscribed_diameter",
    "hexagon_area",
    "model_breakdown",
    "per_piece_spread_area",
    "piece_area",
    "table_fits",
    "unassembled_area",
]
