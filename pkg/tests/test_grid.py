import numpy as np
import pytest

from transitplan.grid import GridIndex


def test_neighborhood_covers_radius_query():
    # Every point within cell_size of a query must appear among the
    # candidates from the query's 3x3 cell block.
    rng = np.random.default_rng(11)
    pts = rng.uniform(-4000, 4000, size=(500, 2))
    radius = 700.0
    index = GridIndex(pts, radius)
    queries = rng.uniform(-4200, 4200, size=(80, 2))
    for q in queries:
        cand = set(index.neighborhood(index.key_of(q)).tolist())
        d = np.hypot(*(pts - q).T)
        for i in np.flatnonzero(d <= radius):
            assert int(i) in cand


def test_cells_partition_points():
    rng = np.random.default_rng(12)
    pts = rng.uniform(-100, 100, size=(200, 2))
    index = GridIndex(pts, 30.0)
    seen = np.concatenate(list(index._cells.values()))
    assert sorted(seen.tolist()) == list(range(200))


def test_negative_coordinates_handled():
    pts = np.array([[-10.0, -10.0], [-10.5, -10.5], [10.0, 10.0]])
    index = GridIndex(pts, 1.0)
    cand = index.neighborhood(index.key_of(np.array([-10.2, -10.2])))
    assert 0 in cand.tolist() and 1 in cand.tolist()


def test_rejects_nonpositive_cell():
    with pytest.raises(ValueError):
        GridIndex(np.zeros((1, 2)), 0.0)
