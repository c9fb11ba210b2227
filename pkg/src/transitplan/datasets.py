"""Synthetic house-coordinate datasets for demos and tests.

Real residential data is rarely shippable, so the package generates a
stand-in: Gaussian blobs of houses scattered over a city-scale square,
centered by default on a dense residential area of West Jakarta.
"""

import numpy as np

from . import geo
from .validation import check_coords, check_int, check_scalar

DEFAULT_FIXTURE_SEED = 7
DEFAULT_CENTER = (-6.16, 106.76)


def _separated_centers(rng, n, half_m, min_separation_m, max_tries=20000):
    """Uniform centers in a square, rejecting pairs closer than the minimum."""
    centers = []
    min_sq = min_separation_m * min_separation_m
    for _ in range(max_tries):
        cand = rng.uniform(-half_m, half_m, size=2)
        if all(((cand - c) ** 2).sum() >= min_sq for c in centers):
            centers.append(cand)
            if len(centers) == n:
                return np.asarray(centers)
    raise ValueError(
        f"could not place {n} blob centers {min_separation_m:g} m apart "
        f"in a {2 * half_m:g} m square"
    )


def make_house_blobs(n_houses=8000, n_blobs=20, span_km=6.0,
                     center=DEFAULT_CENTER, sigma_range_m=(35.0, 85.0),
                     min_separation_m=550.0, seed=DEFAULT_FIXTURE_SEED):
    """Draw houses from Gaussian blobs inside a ``span_km`` square.

    Blob centers are rejection-sampled so no two fall closer than
    ``min_separation_m`` (residential pockets, not one smear); blob
    standard deviations are uniform in ``sigma_range_m`` and houses are
    split between blobs at random. Deterministic for a fixed ``seed``.

    Returns
    -------
    ndarray of shape (n_houses, 2)
        [lat, lon] rows in decimal degrees, shuffled.
    """
    n_houses = check_int(n_houses, "n_houses", minimum=1)
    n_blobs = check_int(n_blobs, "n_blobs", minimum=1)
    span_km = check_scalar(span_km, "span_km", minimum=0.0, exclusive=True)
    min_separation_m = check_scalar(min_separation_m, "min_separation_m",
                                    minimum=0.0)
    origin = check_coords(center, name="center")[0]
    lo, hi = sigma_range_m
    rng = np.random.default_rng(seed)

    half_m = span_km * 1000.0 / 2.0
    blob_xy = _separated_centers(rng, n_blobs, half_m, min_separation_m)
    blob_sigma = rng.uniform(lo, hi, size=n_blobs)
    sizes = rng.multinomial(n_houses, np.full(n_blobs, 1.0 / n_blobs))

    parts = []
    for xy, sigma, size in zip(blob_xy, blob_sigma, sizes):
        if size == 0:
            continue
        parts.append(xy + rng.normal(0.0, sigma, size=(size, 2)))
    planar = np.concatenate(parts, axis=0)
    houses = geo.unproject_local(origin, planar)
    return houses[rng.permutation(len(houses))]


def make_two_blobs(n_per_blob=50, separation_m=2000.0, sigma_m=30.0,
                   center=DEFAULT_CENTER, seed=0):
    """Two tight, well-separated blobs; handy for clustering sanity checks.

    Returns
    -------
    (houses, blob_centers) : ndarray (2 * n_per_blob, 2), ndarray (2, 2)
        House coordinates and the two blob centers, all [lat, lon].
    """
    rng = np.random.default_rng(seed)
    origin = check_coords(center, name="center")[0]
    offsets = np.array([[-separation_m / 2.0, 0.0], [separation_m / 2.0, 0.0]])
    parts = [off + rng.normal(0.0, sigma_m, size=(n_per_blob, 2))
             for off in offsets]
    houses = geo.unproject_local(origin, np.concatenate(parts, axis=0))
    blob_centers = geo.unproject_local(origin, offsets)
    return houses, blob_centers
