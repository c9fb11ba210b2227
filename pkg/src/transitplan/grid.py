"""Uniform 2D binning for neighborhood lookups in the projected plane.

Cell side equals the query radius, so every point within that radius of a
query location sits in the query's cell or one of its eight neighbors.
Candidate lists still need an exact distance filter; the grid only prunes.
"""

import numpy as np


class GridIndex:
    """Hash points of shape (n, 2) into square cells of side ``cell_size``."""

    def __init__(self, points, cell_size):
        if cell_size <= 0:
            raise ValueError(f"cell_size must be > 0, got {cell_size}")
        self.points = np.asarray(points, dtype=np.float64)
        self.cell_size = float(cell_size)
        self._cells = {}
        keys = self.key_of(self.points)
        order = np.lexsort((np.arange(len(keys)), keys[:, 1], keys[:, 0]))
        sorted_keys = keys[order]
        # Split the index array at cell boundaries; one pass, no per-point dict ops.
        boundaries = np.flatnonzero(np.any(np.diff(sorted_keys, axis=0) != 0, axis=1)) + 1
        for chunk in np.split(order, boundaries):
            self._cells[tuple(keys[chunk[0]])] = np.sort(chunk)
        self._neighbor_cache = {}

    def key_of(self, points):
        """Integer cell key(s) for point(s)."""
        return np.floor(np.asarray(points) / self.cell_size).astype(np.int64)

    def neighborhood(self, key):
        """Indices of all points in the 3x3 block of cells around ``key``.

        Covers every point within ``cell_size`` of any location inside the
        key's cell. Results are cached; the index is static.
        """
        key = (int(key[0]), int(key[1]))
        cached = self._neighbor_cache.get(key)
        if cached is not None:
            return cached
        parts = []
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                cell = self._cells.get((key[0] + di, key[1] + dj))
                if cell is not None:
                    parts.append(cell)
        if parts:
            result = np.sort(np.concatenate(parts))
        else:
            result = np.empty(0, dtype=np.int64)
        self._neighbor_cache[key] = result
        return result
