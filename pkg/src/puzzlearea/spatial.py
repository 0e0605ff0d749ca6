"""Uniform spatial hash grid for broad-phase neighbour lookup."""

from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

# Cell (i, j) is stored under the integer key (i + _OFF) * _SPAN + (j + _OFF).
_OFF = 1 << 30
_SPAN = 1 << 31
_BLOCK = np.array([i * _SPAN + j for i in (-1, 0, 1) for j in (-1, 0, 1)], dtype=np.int64)


class SpatialHash:
    """Buckets point ids by the grid cell containing their position.

    With ``cell_size`` at least the largest interaction distance, every
    neighbour of a query point lives in the 3x3 block of cells around it.
    """

    def __init__(self, cell_size: float):
        if not cell_size > 0:
            raise ValueError("cell_size must be positive")
        self.cell_size = float(cell_size)
        self._cells = defaultdict(list)
        self._count = 0

    def __len__(self):
        return self._count

    def cell_of(self, x, y):
        return (math.floor(x / self.cell_size), math.floor(y / self.cell_size))

    def _key(self, x, y):
        i, j = self.cell_of(x, y)
        return (i + _OFF) * _SPAN + (j + _OFF)

    def insert(self, idx, x, y):
        self._cells[self._key(x, y)].append(idx)
        self._count += 1

    def remove(self, idx, x, y):
        self._cells[self._key(x, y)].remove(idx)
        self._count -= 1

    def query(self, x, y):
        """Ids in the 3x3 cell block around ``(x, y)``."""
        base = self._key(x, y)
        out = []
        for off in _BLOCK.tolist():
            bucket = self._cells.get(base + off)
            if bucket:
                out.extend(bucket)
        return out

    def query_many(self, xy) -> np.ndarray:
        """Union of neighbour ids over many query points, sorted and unique."""
        xy = np.asarray(xy, dtype=float).reshape(-1, 2)
        if len(xy) == 0:
            return np.empty(0, dtype=np.intp)
        cells = np.floor(xy / self.cell_size).astype(np.int64) + _OFF
        keys = np.unique(cells[:, 0] * _SPAN + cells[:, 1])
        keys = np.unique((keys[:, None] + _BLOCK[None, :]).ravel())
        ids = []
        get = self._cells.get
        for key in keys.tolist():
            bucket = get(key)
            if bucket:
                ids.extend(bucket)
        return np.unique(np.array(ids, dtype=np.intp))
