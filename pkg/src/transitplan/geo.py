"""Geodesic primitives: great-circle distance and a local planar projection.

All functions take coordinates as [lat, lon] in decimal degrees (WGS84) and
return meters. Distances use the spherical haversine formula at the IUGG
mean Earth radius; at city scale (a few km) this is accurate to well under
a meter, which is all a several-hundred-meter service radius needs.

The planar projection is equirectangular around a fixed origin: longitude
is scaled by cos(origin latitude) so that distances in the projected plane
are meter-true to within ~0.2% inside a few kilometers of the origin. It
exists so that averaging positions (the mean-shift inner loop) is plain
vector arithmetic instead of spherical trigonometry.
"""

import numpy as np

from .exceptions import WorkspaceTooLarge

# IUGG mean Earth radius, meters.
EARTH_RADIUS_M = 6_371_008.8

# Planar projection is only trusted inside a 1-degree neighborhood.
MAX_WORKSPACE_DEG = 1.0


def haversine_m(a, b):
    """Great-circle distance in meters between [lat, lon] points.

    Parameters
    ----------
    a, b : array-like
        Points of shape (..., 2); the leading dimensions broadcast, so a
        single pair, two equal-length arrays, or an (n, 1, 2) x (1, m, 2)
        cross product all work.

    Returns
    -------
    float or ndarray
        Distance(s) in meters. Symmetric in its arguments and zero for
        identical points.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    lat1 = np.radians(a[..., 0])
    lat2 = np.radians(b[..., 0])
    dlat = np.radians(b[..., 0] - a[..., 0])
    dlon = np.radians(b[..., 1] - a[..., 1])
    h = np.sin(dlat / 2.0) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin(dlon / 2.0) ** 2
    # Clip guards tiny negative/overshoot rounding before the sqrt/arcsin.
    d = 2.0 * EARTH_RADIUS_M * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))
    if d.ndim == 0:
        return float(d)
    return d


def pairwise_distance_m(A, B=None):
    """All-pairs haversine distances.

    Parameters
    ----------
    A : array-like of shape (n, 2)
    B : array-like of shape (m, 2), optional
        Defaults to ``A`` (square self-distance matrix).

    Returns
    -------
    ndarray of shape (n, m)
    """
    A = np.asarray(A, dtype=np.float64)
    B = A if B is None else np.asarray(B, dtype=np.float64)
    return haversine_m(A[:, None, :], B[None, :, :])


def _check_workspace(origin, points):
    origin = np.asarray(origin, dtype=np.float64)
    points = np.asarray(points, dtype=np.float64)
    dlat = np.abs(points[..., 0] - origin[0])
    dlon = np.abs(points[..., 1] - origin[1])
    worst = max(float(np.max(dlat, initial=0.0)), float(np.max(dlon, initial=0.0)))
    if worst >= MAX_WORKSPACE_DEG:
        raise WorkspaceTooLarge(
            f"points extend {worst:.3f} deg from the origin; the planar "
            f"workspace is limited to {MAX_WORKSPACE_DEG} deg"
        )
    return origin, points


def project_local(origin, points):
    """Project [lat, lon] points to meters east/north of ``origin``.

    Equirectangular: x = R * dlon_rad * cos(origin_lat), y = R * dlat_rad.
    Every point must lie within 1 degree of the origin in both axes.

    Raises
    ------
    WorkspaceTooLarge
        When a point violates the 1-degree limit.
    """
    origin, points = _check_workspace(origin, points)
    coslat = np.cos(np.radians(origin[0]))
    x = EARTH_RADIUS_M * np.radians(points[..., 1] - origin[1]) * coslat
    y = EARTH_RADIUS_M * np.radians(points[..., 0] - origin[0])
    return np.stack([x, y], axis=-1)


def unproject_local(origin, xy):
    """Inverse of :func:`project_local`: planar meters back to [lat, lon]."""
    origin = np.asarray(origin, dtype=np.float64)
    xy = np.asarray(xy, dtype=np.float64)
    coslat = np.cos(np.radians(origin[0]))
    lat = origin[0] + np.degrees(xy[..., 1] / EARTH_RADIUS_M)
    lon = origin[1] + np.degrees(xy[..., 0] / (EARTH_RADIUS_M * coslat))
    return np.stack([lat, lon], axis=-1)
