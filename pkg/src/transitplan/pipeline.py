"""End-to-end orchestration: bandwidth sweep, selection, then routing.

The sweep clusters the houses at each candidate service radius, scores the
coverage, and picks the radius with the lowest error percentage (ties go
to the larger radius, which means fewer stops for equal coverage). The
chosen radius' stops then feed the ant-colony router.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .clustering import mean_shift
from .coverage import CoverageReport, coverage_report
from .exceptions import TooFewStops
from .routing import Tour, aco_solve
from .validation import check_coords

DEFAULT_BANDWIDTHS_M = (500.0, 450.0, 400.0, 350.0, 300.0, 250.0)


@dataclass
class SweepReport:
    """Coverage rows for every swept bandwidth, plus the winner.

    ``rows`` are ordered by descending bandwidth; ``chosen_bandwidth_m``
    is always one of them.
    """

    rows: List[CoverageReport]
    chosen_bandwidth_m: float


@dataclass
class PlanResult:
    """Everything the end-to-end run produced."""

    sweep: SweepReport
    bandwidth_m: float
    centers: np.ndarray
    labels: np.ndarray
    tour: Tour
    history: List[float]
    existing_stops: Optional[np.ndarray] = None


def select_bandwidth(rows):
    """Lowest error percentage wins; ties go to the larger bandwidth."""
    if not rows:
        raise ValueError("no sweep rows to select from")
    ordered = sorted(rows, key=lambda r: -r.bandwidth_m)
    best = ordered[0]
    for row in ordered[1:]:
        if row.error_percentage < best.error_percentage:
            best = row
    return best.bandwidth_m


def _normalize_bandwidths(bandwidths):
    values = sorted({float(b) for b in bandwidths}, reverse=True)
    if not values:
        raise ValueError("bandwidths must be non-empty")
    if values[-1] <= 0:
        raise ValueError("bandwidths must all be > 0")
    return values


def _run_sweep(houses, bandwidths, cluster_options):
    houses = check_coords(houses, name="houses")
    rows = []
    results = {}
    for bw in _normalize_bandwidths(bandwidths):
        result = mean_shift(houses, bw, **cluster_options)
        rows.append(coverage_report(houses, result.centers, bw,
                                    stops_spawned=result.n_centers))
        results[bw] = result
    return rows, results


def bandwidth_sweep(houses, bandwidths=DEFAULT_BANDWIDTHS_M, *,
                    cluster_options=None):
    """Cluster + score coverage at each bandwidth; pick the best radius.

    ``cluster_options`` are keyword arguments forwarded to
    :func:`transitplan.clustering.mean_shift` (eps, iteration cap, ...).
    """
    rows, _ = _run_sweep(houses, bandwidths, cluster_options or {})
    return SweepReport(rows=rows, chosen_bandwidth_m=select_bandwidth(rows))


def plan(houses, bandwidths=DEFAULT_BANDWIDTHS_M, *, existing_stops=None,
         cluster_options=None, aco_options=None):
    """Full pipeline: sweep, select the radius, route its stops.

    ``aco_options`` are keyword arguments for
    :func:`transitplan.routing.aco_solve` (alpha, beta, rho, seed, ...).

    Raises
    ------
    TooFewStops
        When the chosen bandwidth yields fewer than 3 stops.
    """
    rows, results = _run_sweep(houses, bandwidths, cluster_options or {})
    chosen = select_bandwidth(rows)
    sweep = SweepReport(rows=rows, chosen_bandwidth_m=chosen)
    clustering = results[chosen]
    if clustering.n_centers < 3:
        raise TooFewStops(
            f"chosen bandwidth {chosen:g} m produced only "
            f"{clustering.n_centers} stops; routing needs at least 3"
        )
    if existing_stops is not None:
        existing_stops = check_coords(existing_stops, name="existing_stops")
    tour, history = aco_solve(clustering.centers, **(aco_options or {}))
    return PlanResult(
        sweep=sweep,
        bandwidth_m=chosen,
        centers=clustering.centers,
        labels=clustering.labels,
        tour=tour,
        history=history,
        existing_stops=existing_stops,
    )
