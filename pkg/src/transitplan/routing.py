"""Closed-tour routing over the bus stops with ant-colony optimization.

Each ant builds a closed tour by repeatedly choosing the next unvisited
stop with probability proportional to tau^alpha * (1/d)^beta, where tau is
the pheromone intensity on the edge and 1/d its visibility. After every
iteration the trail is recombined as tau <- (1-rho) tau + rho * deposit,
with each ant spreading q / tour_length over the edges it used (ant-cycle
deposit). An exhaustive solver is included as an exact oracle for small
instances.
"""

import itertools
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from . import geo
from .exceptions import (
    DegenerateDistance,
    DuplicateStops,
    InstanceTooLarge,
    TooFewStops,
)
from .validation import check_coords, check_int, check_scalar

# Keeps every tau strictly positive so transition weights stay defined.
PHEROMONE_FLOOR = 1e-12

BRUTE_FORCE_MAX_STOPS = 11

DEFAULT_ALPHA = 4.0
DEFAULT_BETA = 1.0
DEFAULT_RHO = 0.15
DEFAULT_N_ANTS = 30
DEFAULT_N_ITERATIONS = 500


@dataclass
class Tour:
    """A closed cycle over stop indices and its geodesic length."""

    order: np.ndarray
    length_m: float


def tour_length(order, dist):
    """Length of the closed cycle visiting ``order`` and returning home.

    Edge lengths are sorted before summing, so rotations and reversals of
    the same cycle produce bit-identical totals.
    """
    order = np.asarray(order, dtype=np.int64)
    n = dist.shape[0]
    if sorted(order.tolist()) != list(range(n)):
        raise ValueError(f"order must be a permutation of 0..{n - 1}")
    edges = np.asarray(dist)[order, np.roll(order, -1)]
    return float(np.sort(edges).sum())


def transition_probabilities(current, unvisited, tau, dist, alpha, beta):
    """Next-stop distribution: p(j) proportional to tau_cj^a * (1/d_cj)^b.

    Parameters
    ----------
    current : int
    unvisited : sequence of int
        Candidate next stops; sets are sorted for a deterministic order.
    tau : ndarray of shape (n, n)
    dist : ndarray of shape (n, n)
        Pairwise distances in meters.
    alpha, beta : float
        Pheromone and visibility exponents, both >= 0.

    Returns
    -------
    ndarray aligned with ``unvisited``, non-negative, summing to 1.

    Raises
    ------
    DegenerateDistance
        If some candidate edge has zero length (duplicate stops).
    """
    if isinstance(unvisited, (set, frozenset)):
        unvisited = sorted(unvisited)
    cand = np.asarray(unvisited, dtype=np.int64)
    if cand.size == 0:
        raise ValueError("unvisited must be non-empty")
    d = np.asarray(dist)[current, cand]
    if np.any(d == 0.0):
        raise DegenerateDistance(
            f"zero-length edge from stop {current}; deduplicate stops first"
        )
    w = np.asarray(tau)[current, cand] ** alpha * (1.0 / d) ** beta
    return w / w.sum()


def update_pheromone(tau, rho, deposits):
    """Evaporate and reinforce: (1 - rho) * tau + rho * deposits.

    Computed as tau + rho * (deposits - tau) so that tau == deposits is a
    floating-point fixed point. The result is floored at
    :data:`PHEROMONE_FLOOR` to keep transition weights well-defined.
    """
    rho = check_scalar(rho, "rho", minimum=0.0, exclusive=True,
                       maximum=1.0, max_exclusive=True)
    tau = np.asarray(tau, dtype=np.float64)
    deposits = np.asarray(deposits, dtype=np.float64)
    if tau.shape != deposits.shape:
        raise ValueError(f"shape mismatch: {tau.shape} vs {deposits.shape}")
    return np.maximum(tau + rho * (deposits - tau), PHEROMONE_FLOOR)


def construct_tour(rng, start, tau, dist, alpha, beta):
    """Build one closed tour by sequentially sampling next stops.

    ``rng`` is a ``numpy.random.Generator``; the walk starts at ``start``,
    visits every stop exactly once, and closes back on the start.
    """
    dist = np.asarray(dist)
    n = dist.shape[0]
    if n < 2:
        raise TooFewStops("need at least 2 stops to build a tour")
    order = np.empty(n, dtype=np.int64)
    order[0] = start
    remaining = np.ones(n, dtype=bool)
    remaining[start] = False
    current = start
    for step in range(1, n):
        cand = np.flatnonzero(remaining)
        p = transition_probabilities(current, cand, tau, dist, alpha, beta)
        cum = np.cumsum(p)
        pick = np.searchsorted(cum, rng.random(), side="right")
        current = int(cand[min(pick, cand.size - 1)])
        order[step] = current
        remaining[current] = False
    return Tour(order=order, length_m=tour_length(order, dist))


def brute_force_tsp(stops):
    """Exact shortest closed tour by enumerating all undirected cycles.

    Only feasible up to :data:`BRUTE_FORCE_MAX_STOPS` stops
    ((n-1)!/2 cycles). Ties resolve to the lexicographically smallest
    order; the returned order always starts at stop 0.
    """
    X = check_coords(stops, name="stops")
    n = X.shape[0]
    if n < 3:
        raise TooFewStops(f"need at least 3 stops, got {n}")
    if n > BRUTE_FORCE_MAX_STOPS:
        raise InstanceTooLarge(
            f"instance too large: {n} stops exceeds the "
            f"{BRUTE_FORCE_MAX_STOPS}-stop exhaustive-search limit"
        )
    dist = geo.pairwise_distance_m(X)
    rows = dist.tolist()
    best_len = float("inf")
    best = None
    for perm in itertools.permutations(range(1, n)):
        # Each undirected cycle appears twice (reversed); keep one.
        if perm[0] > perm[-1]:
            continue
        length = rows[0][perm[0]] + rows[perm[-1]][0]
        prev = perm[0]
        for j in perm[1:]:
            length += rows[prev][j]
            prev = j
        if length < best_len:
            best_len = length
            best = perm
    order = np.array((0,) + best, dtype=np.int64)
    return Tour(order=order, length_m=tour_length(order, dist))


def _check_stops(stops):
    X = check_coords(stops, name="stops")
    if X.shape[0] < 3:
        raise TooFewStops(f"need at least 3 stops, got {X.shape[0]}")
    dist = geo.pairwise_distance_m(X)
    offdiag = dist[~np.eye(X.shape[0], dtype=bool)]
    if np.any(offdiag == 0.0):
        raise DuplicateStops("two stops share the same coordinates")
    return X, dist


def aco_solve(stops, *, alpha=DEFAULT_ALPHA, beta=DEFAULT_BETA,
              rho=DEFAULT_RHO, n_ants=DEFAULT_N_ANTS,
              n_iterations=DEFAULT_N_ITERATIONS, deposit_q=1.0,
              initial_tau=1.0, seed=None):
    """Ant-colony search for a short closed tour over [lat, lon] stops.

    Per iteration, each ant builds a tour from a uniformly random start;
    deposits of ``deposit_q / length`` accumulate on every edge each ant
    used, and the trail is updated once. Fully deterministic for a fixed
    ``seed``: every ant draws from its own generator spawned from the seed,
    so the outcome does not depend on scheduling.

    Returns
    -------
    (best, history) : Tour, list of float
        Best tour found and the best-so-far length after each iteration
        (monotone non-increasing).
    """
    alpha = check_scalar(alpha, "alpha", minimum=0.0)
    beta = check_scalar(beta, "beta", minimum=0.0)
    rho = check_scalar(rho, "rho", minimum=0.0, exclusive=True,
                       maximum=1.0, max_exclusive=True)
    n_ants = check_int(n_ants, "n_ants", minimum=1)
    n_iterations = check_int(n_iterations, "n_iterations", minimum=1)
    deposit_q = check_scalar(deposit_q, "deposit_q", minimum=0.0, exclusive=True)
    initial_tau = check_scalar(initial_tau, "initial_tau", minimum=0.0, exclusive=True)

    X, dist = _check_stops(stops)
    n = X.shape[0]
    ant_rngs = [np.random.default_rng(s)
                for s in np.random.SeedSequence(seed).spawn(n_ants)]
    tau = np.full((n, n), initial_tau, dtype=np.float64)

    best_order = None
    best_len = float("inf")
    history = []
    for _ in range(n_iterations):
        deposits = np.zeros((n, n), dtype=np.float64)
        for rng in ant_rngs:
            start = int(rng.integers(n))
            tour = construct_tour(rng, start, tau, dist, alpha, beta)
            if tour.length_m < best_len:
                best_len = tour.length_m
                best_order = tour.order
            amount = deposit_q / tour.length_m
            nxt = np.roll(tour.order, -1)
            deposits[tour.order, nxt] += amount
            deposits[nxt, tour.order] += amount
        tau = update_pheromone(tau, rho, deposits)
        history.append(best_len)
    return Tour(order=best_order, length_m=best_len), history


class AntColonyTSP(BaseEstimator):
    """Ant-colony closed-tour solver with a scikit-learn parameter surface.

    ``fit(X)`` runs :func:`aco_solve` on [lat, lon] stop rows and stores:

    - ``best_order_``: visiting order as indices into ``X``,
    - ``best_length_m_``: closed-tour length in meters,
    - ``history_``: best-so-far length per iteration.

    Defaults follow the reference configuration this package ships with
    (alpha=4, beta=1, rho=0.15, 30 ants, 500 iterations).
    """

    def __init__(self, alpha=DEFAULT_ALPHA, beta=DEFAULT_BETA,
                 rho=DEFAULT_RHO, n_ants=DEFAULT_N_ANTS,
                 n_iterations=DEFAULT_N_ITERATIONS, deposit_q=1.0,
                 initial_tau=1.0, random_state=None):
        self.alpha = alpha
        self.beta = beta
        self.rho = rho
        self.n_ants = n_ants
        self.n_iterations = n_iterations
        self.deposit_q = deposit_q
        self.initial_tau = initial_tau
        self.random_state = random_state

    def fit(self, X, y=None):
        """Search for a short closed tour over the stops in ``X``."""
        best, history = aco_solve(
            X,
            alpha=self.alpha,
            beta=self.beta,
            rho=self.rho,
            n_ants=self.n_ants,
            n_iterations=self.n_iterations,
            deposit_q=self.deposit_q,
            initial_tau=self.initial_tau,
            seed=self.random_state,
        )
        self.best_order_ = best.order
        self.best_length_m_ = best.length_m
        self.history_ = history
        return self
