"""File input/output: house datasets (CSV or GeoJSON) and GeoJSON export.

Input CSV is two columns with a literal ``lat,lon`` header, decimal
degrees, UTF-8, LF or CRLF. GeoJSON input is an RFC 7946 FeatureCollection
of Points (coordinates are [lon, lat]). All file writes go through a
temporary file and an atomic rename, so failures never leave partial
output behind.
"""

import csv
import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .exceptions import EmptyDataset, ParseError

_LAT_RANGE = (-90.0, 90.0)
_LON_RANGE = (-180.0, 180.0)


@dataclass
class HouseDataset:
    """Coordinates loaded from a file, plus an optional stop overlay."""

    houses: np.ndarray
    source_path: str
    existing_stops: Optional[np.ndarray] = None


def _check_pair(lat, lon, where):
    if not (math.isfinite(lat) and math.isfinite(lon)):
        raise ParseError("coordinates must be finite", line=where)
    if not _LAT_RANGE[0] <= lat <= _LAT_RANGE[1]:
        raise ParseError(f"latitude out of range [-90, 90]: {lat!r}", line=where)
    if not _LON_RANGE[0] <= lon <= _LON_RANGE[1]:
        raise ParseError(f"longitude out of range [-180, 180]: {lon!r}", line=where)


def _parse_csv(text):
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyDataset("file is empty") from None
    if [h.strip() for h in header] != ["lat", "lon"]:
        raise ParseError(f"expected header 'lat,lon', got {','.join(header)!r}",
                         line=1)
    points = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", line=lineno)
        try:
            lat, lon = float(row[0]), float(row[1])
        except ValueError:
            raise ParseError(f"not a number: {row!r}", line=lineno) from None
        _check_pair(lat, lon, lineno)
        points.append((lat, lon))
    if not points:
        raise EmptyDataset("no data rows found")
    return np.asarray(points, dtype=np.float64)


def _parse_geojson(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ParseError("expected a GeoJSON FeatureCollection")
    points = []
    for i, feature in enumerate(doc.get("features", [])):
        geom = feature.get("geometry") or {}
        if geom.get("type") != "Point":
            raise ParseError(f"feature {i}: only Point geometries are supported")
        coords = geom.get("coordinates")
        if not isinstance(coords, (list, tuple)) or len(coords) < 2:
            raise ParseError(f"feature {i}: malformed coordinates")
        # GeoJSON stores [lon, lat]; a third (elevation) element is ignored.
        try:
            lon, lat = float(coords[0]), float(coords[1])
        except (TypeError, ValueError):
            raise ParseError(f"feature {i}: coordinates are not numbers") from None
        _check_pair(lat, lon, None)
        points.append((lat, lon))
    if not points:
        raise EmptyDataset("no Point features found")
    return np.asarray(points, dtype=np.float64)


def load_points(path):
    """Load [lat, lon] rows from a CSV or GeoJSON file (sniffed by content)."""
    text = Path(path).read_text(encoding="utf-8-sig")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_geojson(text)
    return _parse_csv(text)


def load_houses(path, existing_stops_path=None):
    """Load a house dataset, optionally with an existing-stop overlay file."""
    houses = load_points(path)
    existing = None
    if existing_stops_path is not None:
        existing = load_points(existing_stops_path)
    return HouseDataset(houses=houses, source_path=str(path),
                        existing_stops=existing)


def _atomic_write_text(path, text):
    """Write via a sibling temp file + rename; no partial files on failure."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."),
                               prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        # mkstemp files are 0600; restore ordinary umask-respecting mode
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def houses_csv_text(points):
    """CSV document ('lat,lon' header) with full-precision coordinates."""
    lines = ["lat,lon"]
    for lat, lon in np.asarray(points, dtype=np.float64):
        lines.append(f"{float(lat)!r},{float(lon)!r}")
    return "\n".join(lines) + "\n"


def write_houses_csv(path, points):
    _atomic_write_text(path, houses_csv_text(points))


def _point_feature(lat, lon, properties):
    return {
        "type": "Feature",
        "geometry": {"type": "Point",
                     "coordinates": [float(lon), float(lat)]},
        "properties": properties,
    }


def tour_geojson(stops, order, existing_stops=None, length_m=None):
    """FeatureCollection for a closed tour.

    One Point per stop carrying ``stop_seq`` (its 1-based position in the
    tour), one LineString tracing the cycle with the first coordinate
    repeated at the end, and optional existing-stop Points tagged
    ``kind: existing``.
    """
    stops = np.asarray(stops, dtype=np.float64)
    order = np.asarray(order, dtype=np.int64)
    features = []
    for seq, stop_idx in enumerate(order, start=1):
        lat, lon = stops[stop_idx]
        features.append(_point_feature(lat, lon, {"stop_seq": seq}))
    ring = [[float(stops[i][1]), float(stops[i][0])] for i in order]
    ring.append(ring[0])
    line_props = {}
    if length_m is not None:
        line_props["length_m"] = float(length_m)
    features.append({
        "type": "Feature",
        "geometry": {"type": "LineString", "coordinates": ring},
        "properties": line_props,
    })
    if existing_stops is not None:
        for lat, lon in np.asarray(existing_stops, dtype=np.float64):
            features.append(_point_feature(lat, lon, {"kind": "existing"}))
    return {"type": "FeatureCollection", "features": features}


def stops_geojson(centers, existing_stops=None):
    """FeatureCollection of stop Points (no tour), indexed by ``stop_id``."""
    features = [
        _point_feature(lat, lon, {"stop_id": i})
        for i, (lat, lon) in enumerate(np.asarray(centers, dtype=np.float64))
    ]
    if existing_stops is not None:
        for lat, lon in np.asarray(existing_stops, dtype=np.float64):
            features.append(_point_feature(lat, lon, {"kind": "existing"}))
    return {"type": "FeatureCollection", "features": features}


def geojson_text(collection):
    return json.dumps(collection, indent=2) + "\n"


def write_geojson(path, collection):
    _atomic_write_text(path, geojson_text(collection))


def export_geojson(plan_result, path):
    """Write a :class:`~transitplan.pipeline.PlanResult` tour as GeoJSON."""
    collection = tour_geojson(
        plan_result.centers,
        plan_result.tour.order,
        existing_stops=plan_result.existing_stops,
        length_m=plan_result.tour.length_m,
    )
    write_geojson(path, collection)
