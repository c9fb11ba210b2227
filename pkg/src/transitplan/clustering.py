"""Mean-shift mode seeking over house coordinates.

Every house seeds a trajectory that repeatedly moves to the Gaussian-kernel
weighted mean of its neighborhood until the step length drops below a
convergence threshold. Converged trajectories pile up on the modes of the
kernel density estimate; nearby modes are merged and the survivors are the
proposed bus-stop locations, with the kernel bandwidth playing the role of
the stop's service radius in meters.

The arithmetic runs in a local equirectangular plane centered on the data
centroid (see :mod:`transitplan.geo`), so the weighted mean is an ordinary
vector average in meters. Weights beyond ``kernel_cutoff`` bandwidths are
treated as exactly zero, which turns the dense all-pairs sum into a
grid-binned neighborhood sum.
"""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from . import geo
from .exceptions import EmptyInput, IsolatedSeed, WorkspaceTooLarge
from .grid import GridIndex
from .validation import check_coords, check_int, check_planar, check_scalar

DEFAULT_BANDWIDTH_M = 500.0
DEFAULT_CONVERGENCE_EPS_M = 0.01
DEFAULT_MAX_ITERATIONS = 300
DEFAULT_KERNEL_CUTOFF = 3.0

# Packs (ix, iy) grid keys into one int64 for fast grouping.
_KEY_STRIDE = 2 ** 31


def gaussian_weight(distance_m, bandwidth_m, kernel_cutoff=DEFAULT_KERNEL_CUTOFF):
    """Gaussian kernel weight exp(-d^2 / (2 h^2)) with a hard cutoff.

    Returns exactly 0.0 where ``distance_m > kernel_cutoff * bandwidth_m``.
    Accepts scalars or arrays.
    """
    d = np.asarray(distance_m, dtype=np.float64)
    w = np.exp(-(d * d) / (2.0 * bandwidth_m * bandwidth_m))
    w = np.where(d > kernel_cutoff * bandwidth_m, 0.0, w)
    if w.ndim == 0:
        return float(w)
    return w


def kernel_density(x, data, bandwidth_m, kernel_cutoff=DEFAULT_KERNEL_CUTOFF):
    """Kernel density estimate at planar point ``x`` (unnormalized).

    Uses the truncation-adjusted kernel
    ``exp(-d^2 / (2 h^2)) - exp(-cutoff^2 / 2)`` inside the cutoff radius
    and zero beyond it. Unlike the raw truncated weight sum, this density
    is continuous at the cutoff boundary and is exactly the function the
    mean-shift iteration ascends (its negative profile derivative is
    proportional to :func:`gaussian_weight`), so it is non-decreasing along
    every trajectory.
    """
    x = np.asarray(x, dtype=np.float64).reshape(2)
    data = check_planar(data, name="data")
    d = np.sqrt(((data - x) ** 2).sum(axis=1))
    w = gaussian_weight(d, bandwidth_m, kernel_cutoff)
    offset = np.exp(-kernel_cutoff * kernel_cutoff / 2.0)
    return float(np.where(d <= kernel_cutoff * bandwidth_m, w - offset, 0.0).sum())


def shift_once(x, data, bandwidth_m, kernel_cutoff=DEFAULT_KERNEL_CUTOFF):
    """One mean-shift step: the kernel-weighted mean of ``data`` around ``x``.

    Parameters
    ----------
    x : array-like of shape (2,)
        Current position, planar meters.
    data : array-like of shape (n, 2)
        Planar data points.
    bandwidth_m : float
        Kernel bandwidth (standard deviation) in meters.

    Returns
    -------
    ndarray of shape (2,)

    Raises
    ------
    IsolatedSeed
        If no data point lies within ``kernel_cutoff * bandwidth_m`` of ``x``.
    """
    x = np.asarray(x, dtype=np.float64).reshape(2)
    data = check_planar(data, name="data")
    if data.shape[0] == 0:
        raise EmptyInput("data is empty")
    d = np.sqrt(((data - x) ** 2).sum(axis=1))
    w = gaussian_weight(d, bandwidth_m, kernel_cutoff)
    total = w.sum()
    if total == 0.0:
        raise IsolatedSeed(
            f"no data point within {kernel_cutoff * bandwidth_m:.1f} m of seed"
        )
    return (w[:, None] * data).sum(axis=0) / total


def merge_modes(modes, weights, merge_radius_m):
    """Greedy agglomeration of converged modes.

    Modes are processed in descending ``weights`` order (ties: ascending
    original index). A mode closer than ``merge_radius_m`` to an already
    accepted one is absorbed by it; accepted positions never move. The
    survivors are therefore pairwise at least ``merge_radius_m`` apart.

    Returns
    -------
    (centers, kept) : ndarray of shape (k, 2), ndarray of shape (k,)
        Surviving mode positions and their original indices, in acceptance
        order (highest weight first).
    """
    modes = check_planar(modes, name="modes")
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (modes.shape[0],):
        raise ValueError(
            f"modes and weights must have matching lengths, got "
            f"{modes.shape[0]} and {weights.shape}"
        )
    merge_radius_m = check_scalar(merge_radius_m, "merge_radius_m",
                                  minimum=0.0, exclusive=True)
    order = np.lexsort((np.arange(len(modes)), -weights))
    r2 = merge_radius_m * merge_radius_m
    kept = []
    for i in order:
        if kept:
            d2 = ((modes[kept] - modes[i]) ** 2).sum(axis=1)
            if d2.min() < r2:
                continue
        kept.append(int(i))
    kept = np.asarray(kept, dtype=np.int64)
    return modes[kept], kept


@dataclass
class MeanShiftResult:
    """Outcome of one mean-shift run.

    Attributes
    ----------
    centers : ndarray of shape (k, 2)
        Converged, merged modes as [lat, lon]; these are the proposed stops,
        ordered by descending support.
    labels : ndarray of shape (n,)
        Index of the geodesically nearest center for each input house
        (ties broken toward the lowest index).
    bandwidth_m : float
    n_iter : ndarray of shape (n,)
        Mean-shift steps evaluated per seed.
    origin : ndarray of shape (2,)
        [lat, lon] of the projection origin (the data centroid).
    density_history : list of list of float, or None
        Per-seed kernel density at each visited position, present only when
        the run was asked to record it.
    """

    centers: np.ndarray
    labels: np.ndarray
    bandwidth_m: float
    n_iter: np.ndarray
    origin: np.ndarray
    density_history: list = field(default=None, repr=False)

    @property
    def n_centers(self):
        return int(self.centers.shape[0])


def _iterate_seeds(P, index, bandwidth_m, eps_m, max_iterations, kernel_cutoff,
                   collect_density=False):
    """Run all seed trajectories to convergence in the projected plane.

    Seeds freeze at the position where the probed shift first falls below
    ``eps_m``, so a converged position c satisfies |shift_once(c) - c| < eps
    by construction.
    """
    n = P.shape[0]
    pos = P.copy()
    n_iter = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    inv_two_h2 = 1.0 / (2.0 * bandwidth_m * bandwidth_m)
    r2 = (kernel_cutoff * bandwidth_m) ** 2
    eps2 = eps_m * eps_m
    offset = np.exp(-kernel_cutoff * kernel_cutoff / 2.0)
    pts_sq = (index.points ** 2).sum(axis=1)
    history = [[] for _ in range(n)] if collect_density else None

    for _ in range(max_iterations):
        if active.size == 0:
            break
        keys = index.key_of(pos[active])
        packed = keys[:, 0] * _KEY_STRIDE + keys[:, 1]
        uniq, inverse = np.unique(packed, return_inverse=True)
        converged = np.zeros(active.size, dtype=bool)
        for g in range(uniq.size):
            members = np.flatnonzero(inverse == g)
            seed_idx = active[members]
            cand = index.neighborhood(keys[members[0]])
            pts = index.points[cand]
            seeds = pos[seed_idx]
            # |s - p|^2 via the product expansion; one GEMM instead of a
            # broadcast subtract, then exp only inside the cutoff disk.
            d2 = (seeds ** 2).sum(axis=1)[:, None] + pts_sq[cand][None, :]
            d2 -= 2.0 * (seeds @ pts.T)
            np.maximum(d2, 0.0, out=d2)
            inside = d2 <= r2
            w = np.zeros_like(d2)
            w[inside] = np.exp(-d2[inside] * inv_two_h2)
            sw = w.sum(axis=1)
            # Seeds start on data points, so support never empties; the
            # guard freezes a seed rather than dividing by zero.
            stuck = sw == 0.0
            sw_safe = np.where(stuck, 1.0, sw)
            shifted = (w @ pts) / sw_safe[:, None]
            disp2 = ((shifted - seeds) ** 2).sum(axis=1)
            done = (disp2 < eps2) | stuck
            moving = ~done
            pos[seed_idx[moving]] = shifted[moving]
            converged[members[done]] = True
            if collect_density:
                dens = sw - offset * inside.sum(axis=1)
                for j, si in enumerate(seed_idx):
                    history[si].append(float(dens[j]))
        n_iter[active] += 1
        active = active[~converged]
    return pos, n_iter, history


def _support_counts(index, points, radius_m):
    """Number of indexed data points within ``radius_m`` of each query point."""
    counts = np.zeros(points.shape[0], dtype=np.int64)
    keys = index.key_of(points)
    packed = keys[:, 0] * _KEY_STRIDE + keys[:, 1]
    uniq, inverse = np.unique(packed, return_inverse=True)
    pts_sq = (index.points ** 2).sum(axis=1)
    r2 = radius_m * radius_m
    for g in range(uniq.size):
        members = np.flatnonzero(inverse == g)
        cand = index.neighborhood(keys[members[0]])
        pts = index.points[cand]
        queries = points[members]
        d2 = (queries ** 2).sum(axis=1)[:, None] + pts_sq[cand][None, :]
        d2 -= 2.0 * (queries @ pts.T)
        counts[members] = (d2 <= r2).sum(axis=1)
    return counts


def mean_shift(houses, bandwidth_m=DEFAULT_BANDWIDTH_M, *,
               convergence_eps_m=DEFAULT_CONVERGENCE_EPS_M,
               max_iterations=DEFAULT_MAX_ITERATIONS,
               merge_radius_m=None,
               kernel_cutoff=DEFAULT_KERNEL_CUTOFF,
               collect_density=False):
    """Cluster houses by mean shift; converged modes become bus stops.

    Parameters
    ----------
    houses : array-like of shape (n, 2)
        [lat, lon] rows in decimal degrees, all within a 1x1 degree window.
    bandwidth_m : float
        Kernel bandwidth in meters; doubles as the stop's service radius.
    convergence_eps_m : float
        A trajectory stops once its next step would be shorter than this.
    max_iterations : int
        Hard cap on steps per seed.
    merge_radius_m : float, optional
        Modes closer than this collapse into one stop. Defaults to the
        bandwidth: two stops within one service radius serve the same area.
    kernel_cutoff : float
        Weights beyond this many bandwidths are treated as exactly zero.
    collect_density : bool
        Record the kernel density along every trajectory (for diagnostics).

    Returns
    -------
    MeanShiftResult

    The run is deterministic: identical input produces a bit-identical
    result. Seeding uses every house, so no randomness is involved.
    """
    X = check_coords(houses, name="houses")
    bandwidth_m = check_scalar(bandwidth_m, "bandwidth_m", minimum=0.0, exclusive=True)
    convergence_eps_m = check_scalar(convergence_eps_m, "convergence_eps_m",
                                     minimum=0.0, exclusive=True)
    max_iterations = check_int(max_iterations, "max_iterations", minimum=1)
    kernel_cutoff = check_scalar(kernel_cutoff, "kernel_cutoff", minimum=1.0)
    if merge_radius_m is None:
        merge_radius_m = bandwidth_m
    merge_radius_m = check_scalar(merge_radius_m, "merge_radius_m",
                                  minimum=0.0, exclusive=True)

    span = X.max(axis=0) - X.min(axis=0)
    if span.max() > geo.MAX_WORKSPACE_DEG:
        raise WorkspaceTooLarge(
            f"houses span {span[0]:.3f} x {span[1]:.3f} deg; mean shift "
            f"requires a {geo.MAX_WORKSPACE_DEG} x {geo.MAX_WORKSPACE_DEG} "
            f"deg workspace"
        )

    origin = X.mean(axis=0)
    P = geo.project_local(origin, X)
    index = GridIndex(P, kernel_cutoff * bandwidth_m)

    modes, n_iter, history = _iterate_seeds(
        P, index, bandwidth_m, convergence_eps_m, max_iterations,
        kernel_cutoff, collect_density=collect_density,
    )
    support = _support_counts(index, modes, bandwidth_m)
    centers_planar, _ = merge_modes(modes, support, merge_radius_m)
    centers = geo.unproject_local(origin, centers_planar)

    labels = geo.pairwise_distance_m(X, centers).argmin(axis=1)
    return MeanShiftResult(
        centers=centers,
        labels=labels.astype(np.int64),
        bandwidth_m=bandwidth_m,
        n_iter=n_iter,
        origin=origin,
        density_history=history,
    )


class GeoMeanShift(ClusterMixin, BaseEstimator):
    """Mean-shift clustering of geographic points, scikit-learn style.

    Operates on arrays of [lat, lon] rows in decimal degrees and measures
    everything in meters on the sphere. After :meth:`fit`:

    - ``cluster_centers_`` holds the proposed stop locations (k, 2),
    - ``labels_`` maps each input row to its nearest center,
    - ``n_iter_`` records per-seed iteration counts,
    - ``origin_`` is the [lat, lon] origin of the internal projection.

    Parameters mirror :func:`mean_shift`.
    """

    def __init__(self, bandwidth_m=DEFAULT_BANDWIDTH_M,
                 convergence_eps_m=DEFAULT_CONVERGENCE_EPS_M,
                 max_iterations=DEFAULT_MAX_ITERATIONS,
                 merge_radius_m=None,
                 kernel_cutoff=DEFAULT_KERNEL_CUTOFF):
        self.bandwidth_m = bandwidth_m
        self.convergence_eps_m = convergence_eps_m
        self.max_iterations = max_iterations
        self.merge_radius_m = merge_radius_m
        self.kernel_cutoff = kernel_cutoff

    def fit(self, X, y=None):
        """Run mean shift on [lat, lon] rows and store the result."""
        result = mean_shift(
            X,
            self.bandwidth_m,
            convergence_eps_m=self.convergence_eps_m,
            max_iterations=self.max_iterations,
            merge_radius_m=self.merge_radius_m,
            kernel_cutoff=self.kernel_cutoff,
        )
        self.cluster_centers_ = result.centers
        self.labels_ = result.labels
        self.n_iter_ = result.n_iter
        self.origin_ = result.origin
        return self

    def predict(self, X):
        """Index of the geodesically nearest fitted center for each row."""
        check_is_fitted(self, "cluster_centers_")
        X = check_coords(X, name="X")
        return geo.pairwise_distance_m(X, self.cluster_centers_).argmin(axis=1)
