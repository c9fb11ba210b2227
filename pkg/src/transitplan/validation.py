"""Input validation helpers shared by the estimators and functional API."""

import numbers

import numpy as np

from .exceptions import EmptyInput, InvalidCoordinates


def check_coords(X, *, name="coordinates", allow_empty=False):
    """Coerce ``X`` to a float64 array of shape (n, 2) of [lat, lon] rows.

    Latitude must lie in [-90, 90], longitude in [-180, 180], and every
    value must be finite. A single (lat, lon) pair is accepted and promoted
    to shape (1, 2).

    Raises
    ------
    InvalidCoordinates
        On wrong shape, non-finite values, or out-of-range coordinates.
    EmptyInput
        When ``X`` has no rows and ``allow_empty`` is false.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1 and X.shape == (2,):
        X = X.reshape(1, 2)
    if X.ndim != 2 or X.shape[1] != 2:
        raise InvalidCoordinates(
            f"{name} must have shape (n, 2) of [lat, lon] rows, got {X.shape}"
        )
    if X.shape[0] == 0:
        if allow_empty:
            return X
        raise EmptyInput(f"{name} is empty")
    if not np.all(np.isfinite(X)):
        raise InvalidCoordinates(f"{name} contains non-finite values")
    lat, lon = X[:, 0], X[:, 1]
    if lat.min() < -90.0 or lat.max() > 90.0:
        raise InvalidCoordinates(f"{name}: latitude out of range [-90, 90]")
    if lon.min() < -180.0 or lon.max() > 180.0:
        raise InvalidCoordinates(f"{name}: longitude out of range [-180, 180]")
    return X


def check_planar(X, *, name="points"):
    """Coerce ``X`` to a float64 array of shape (n, 2) of planar [x, y] meters."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1 and X.shape == (2,):
        X = X.reshape(1, 2)
    if X.ndim != 2 or X.shape[1] != 2:
        raise InvalidCoordinates(
            f"{name} must have shape (n, 2) of [x, y] rows, got {X.shape}"
        )
    if X.shape[0] and not np.all(np.isfinite(X)):
        raise InvalidCoordinates(f"{name} contains non-finite values")
    return X


def check_scalar(value, name, *, minimum=None, exclusive=False, maximum=None,
                 max_exclusive=False):
    """Validate a numeric hyperparameter and return it as a float."""
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise ValueError(f"{name} must be a number, got {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if minimum is not None:
        if exclusive and value <= minimum:
            raise ValueError(f"{name} must be > {minimum}, got {value}")
        if not exclusive and value < minimum:
            raise ValueError(f"{name} must be >= {minimum}, got {value}")
    if maximum is not None:
        if max_exclusive and value >= maximum:
            raise ValueError(f"{name} must be < {maximum}, got {value}")
        if not max_exclusive and value > maximum:
            raise ValueError(f"{name} must be <= {maximum}, got {value}")
    return value


def check_int(value, name, *, minimum=None):
    """Validate an integer hyperparameter and return it as an int."""
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value
