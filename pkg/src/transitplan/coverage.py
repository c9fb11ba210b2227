"""Service-radius coverage analysis.

A house is a coverage error when its geodesically nearest stop is farther
away than the service radius; the error distance is the excess beyond the
radius (not the raw distance). Reports carry the error count, percentage,
and max/min/median excess in kilometers, rounded half-up to two decimals,
plus the stop count, and serialize to a fixed-column CSV row.
"""

import csv
import io
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional

import numpy as np

from . import geo
from .exceptions import NoCenters, ParseError
from .validation import check_coords, check_scalar

REPORT_COLUMNS = ("bandwidth", "total_error", "error_pct",
                  "max_km", "min_km", "median_km", "stops")


def round_half_up(value, decimals=2):
    """Round half away from zero at ``decimals`` places (0.125 -> 0.13).

    Uses the shortest decimal representation of the float, so values that
    print as exact halves round up the way a person reading them expects.
    """
    q = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(float(value))).quantize(q, rounding=ROUND_HALF_UP))


def assign_nearest(houses, centers):
    """Nearest stop for every house.

    Returns
    -------
    (indices, distances_m) : ndarray of shape (n,), ndarray of shape (n,)
        Index of the geodesically nearest center (ties broken toward the
        lowest index) and the distance to it in meters.

    Raises
    ------
    NoCenters
        If ``centers`` is empty.
    """
    houses = check_coords(houses, name="houses")
    centers = np.asarray(centers, dtype=np.float64)
    if centers.size == 0:
        raise NoCenters("cannot assign houses to an empty set of stops")
    centers = check_coords(centers, name="centers")
    d = geo.pairwise_distance_m(houses, centers)
    idx = d.argmin(axis=1)
    return idx.astype(np.int64), d[np.arange(len(houses)), idx]


@dataclass
class CoverageReport:
    """One row of the coverage summary for a single service radius.

    Error distances are kilometers of excess beyond the radius, rounded
    half-up to two decimals; the three error statistics are ``None`` when
    nothing missed the radius. ``error_percentage`` is
    100 * error_count / total_houses, rounded the same way.
    """

    bandwidth_m: float
    total_houses: int
    error_count: int
    error_percentage: float
    max_error_km: Optional[float]
    min_error_km: Optional[float]
    median_error_km: Optional[float]
    stops_spawned: int

    def to_csv_values(self):
        """Values in :data:`REPORT_COLUMNS` order, formatted for CSV."""
        def km(v):
            return "" if v is None else f"{v:.2f}"
        return [
            f"{self.bandwidth_m:g}",
            str(self.error_count),
            f"{self.error_percentage:.2f}",
            km(self.max_error_km),
            km(self.min_error_km),
            km(self.median_error_km),
            str(self.stops_spawned),
        ]


def _median(sorted_values):
    """Middle element, or the mean of the two middles for even counts."""
    n = len(sorted_values)
    mid = n // 2
    if n % 2 == 1:
        return float(sorted_values[mid])
    return float((sorted_values[mid - 1] + sorted_values[mid]) / 2.0)


def coverage_report(houses, centers, radius_m, *, stops_spawned=None):
    """Coverage summary of ``houses`` served by ``centers`` at ``radius_m``.

    A house is an error iff its nearest-stop distance strictly exceeds the
    radius. ``stops_spawned`` defaults to ``len(centers)``; pass it
    explicitly when reporting on behalf of a clustering run.
    """
    radius_m = check_scalar(radius_m, "radius_m", minimum=0.0, exclusive=True)
    idx, dist = assign_nearest(houses, centers)
    excess_m = dist[dist > radius_m] - radius_m
    total = int(len(dist))
    count = int(excess_m.size)
    if stops_spawned is None:
        stops_spawned = int(np.asarray(centers).reshape(-1, 2).shape[0])
    if count == 0:
        max_km = min_km = median_km = None
    else:
        excess_km = np.sort(excess_m) / 1000.0
        max_km = round_half_up(excess_km[-1])
        min_km = round_half_up(excess_km[0])
        median_km = round_half_up(_median(excess_km))
    return CoverageReport(
        bandwidth_m=float(radius_m),
        total_houses=total,
        error_count=count,
        error_percentage=round_half_up(100.0 * count / total),
        max_error_km=max_km,
        min_error_km=min_km,
        median_error_km=median_km,
        stops_spawned=int(stops_spawned),
    )


def write_report_csv(rows, fileobj):
    """Write coverage rows as CSV in :data:`REPORT_COLUMNS` order."""
    writer = csv.writer(fileobj, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in rows:
        writer.writerow(row.to_csv_values())


def report_csv_text(rows):
    """The CSV document for ``rows`` as a string."""
    buf = io.StringIO()
    write_report_csv(rows, buf)
    return buf.getvalue()


def read_report_csv(fileobj):
    """Parse a coverage CSV back into value dicts (inverse of the writer).

    ``total_houses`` is not part of the CSV contract, so rows come back as
    dicts of the seven serialized columns with numeric types restored.
    """
    reader = csv.reader(fileobj)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty coverage CSV") from None
    if tuple(header) != REPORT_COLUMNS:
        raise ParseError(f"unexpected header {header!r}", line=1)
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec:
            continue
        if len(rec) != len(REPORT_COLUMNS):
            raise ParseError(f"expected {len(REPORT_COLUMNS)} fields, got {len(rec)}",
                             line=lineno)
        try:
            rows.append({
                "bandwidth": float(rec[0]),
                "total_error": int(rec[1]),
                "error_pct": float(rec[2]),
                "max_km": float(rec[3]) if rec[3] else None,
                "min_km": float(rec[4]) if rec[4] else None,
                "median_km": float(rec[5]) if rec[5] else None,
                "stops": int(rec[6]),
            })
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
    return rows
