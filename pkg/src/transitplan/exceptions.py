"""Exception types raised by the transitplan library.

Everything derives from :class:`TransitPlanError` so callers (and the CLI)
can catch library failures in one place. Most of them also derive from
``ValueError`` because they signal invalid input rather than internal bugs.
"""


class TransitPlanError(Exception):
    """Base class for all transitplan errors."""


class InvalidCoordinates(TransitPlanError, ValueError):
    """Coordinates are malformed, non-finite, or outside WGS84 ranges."""


class WorkspaceTooLarge(TransitPlanError, ValueError):
    """Points span more than the 1-degree local workspace the planar
    projection is valid for."""


class EmptyInput(TransitPlanError, ValueError):
    """An operation that needs at least one point received none."""


class IsolatedSeed(TransitPlanError, ValueError):
    """A mean-shift seed has no data point within kernel support."""


class NoCenters(TransitPlanError, ValueError):
    """Coverage analysis was asked to assign houses to an empty set of stops."""


class DegenerateDistance(TransitPlanError, ValueError):
    """A zero-length edge makes inverse-distance visibility undefined;
    deduplicate the stops first."""


class TooFewStops(TransitPlanError, ValueError):
    """Route optimization needs at least three distinct stops."""


class DuplicateStops(TransitPlanError, ValueError):
    """Two stops share the same coordinates."""


class InstanceTooLarge(TransitPlanError, ValueError):
    """The exhaustive tour solver only runs up to 11 stops."""


class EmptyDataset(TransitPlanError, ValueError):
    """An input file contained no data rows."""


class ParseError(TransitPlanError, ValueError):
    """An input file could not be parsed.

    Attributes
    ----------
    line : int or None
        1-based line number (CSV) or feature index (GeoJSON) when known.
    reason : str
        Human-readable description of what was wrong.
    """

    def __init__(self, reason, line=None):
        self.reason = reason
        self.line = line
        if line is not None:
            super().__init__(f"line {line}: {reason}")
        else:
            super().__init__(reason)
