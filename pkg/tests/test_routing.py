import math

import numpy as np
import pytest
from scipy import stats
from sklearn.base import clone

from transitplan import geo
from transitplan.exceptions import (
    DegenerateDistance,
    DuplicateStops,
    InstanceTooLarge,
    TooFewStops,
)
from transitplan.routing import (
    PHEROMONE_FLOOR,
    AntColonyTSP,
    aco_solve,
    brute_force_tsp,
    construct_tour,
    tour_length,
    transition_probabilities,
    update_pheromone,
)

ORIGIN = np.array([-6.16, 106.76])


def random_stops(rng, n, spread=0.02):
    return ORIGIN + rng.uniform(-spread, spread, size=(n, 2))


def symmetric_matrix(values):
    m = np.asarray(values, dtype=np.float64)
    return (m + m.T) / 2.0


class TestTransitionProbabilities:
    def test_uniform_when_everything_equal(self):
        tau = np.ones((4, 4))
        dist = np.full((4, 4), 250.0)
        p = transition_probabilities(0, [1, 2, 3], tau, dist, 1.0, 1.0)
        assert np.allclose(p, 1.0 / 3.0, atol=1e-15)

    def test_zero_exponents_give_uniform(self):
        rng = np.random.default_rng(41)
        tau = rng.uniform(0.1, 5.0, size=(5, 5))
        dist = rng.uniform(10.0, 1000.0, size=(5, 5))
        p = transition_probabilities(0, [1, 2, 3, 4], tau, dist, 0.0, 0.0)
        assert np.allclose(p, 0.25, atol=1e-15)

    def test_worked_example(self):
        # tau01=2, tau02=1, d01=100, d02=200, alpha=beta=1
        # p(1) = (2/100) / ((2/100) + (1/200)) = 0.8
        tau = np.ones((3, 3))
        tau[0, 1] = tau[1, 0] = 2.0
        dist = symmetric_matrix([[0, 100.0, 200.0],
                                 [100.0, 0, 150.0],
                                 [200.0, 150.0, 0]])
        p = transition_probabilities(0, [1, 2], tau, dist, 1.0, 1.0)
        assert p[0] == pytest.approx(0.8, abs=1e-12)
        assert p[1] == pytest.approx(0.2, abs=1e-12)

    def test_distribution_properties_random(self):
        rng = np.random.default_rng(42)
        for _ in range(500):
            n = int(rng.integers(3, 9))
            tau = rng.uniform(1e-3, 10.0, size=(n, n))
            dist = rng.uniform(1.0, 1e5, size=(n, n))
            alpha, beta = rng.uniform(0, 6, size=2)
            cand = list(range(1, n))
            p = transition_probabilities(0, cand, tau, dist, alpha, beta)
            assert np.all(p >= 0)
            assert abs(p.sum() - 1.0) <= 1e-12

    def test_tau_rescaling_invariance(self):
        rng = np.random.default_rng(43)
        tau = rng.uniform(0.1, 4.0, size=(6, 6))
        dist = rng.uniform(50.0, 5000.0, size=(6, 6))
        p1 = transition_probabilities(2, [0, 1, 3, 4, 5], tau, dist, 3.0, 1.5)
        p2 = transition_probabilities(2, [0, 1, 3, 4, 5], 7.5 * tau, dist,
                                      3.0, 1.5)
        assert np.max(np.abs(p1 - p2)) <= 1e-12

    def test_set_input_is_sorted(self):
        tau = np.ones((4, 4))
        dist = symmetric_matrix([[0, 100, 200, 400],
                                 [100, 0, 1, 1],
                                 [200, 1, 0, 1],
                                 [400, 1, 1, 0]])
        p_set = transition_probabilities(0, {3, 1, 2}, tau, dist, 1.0, 1.0)
        p_seq = transition_probabilities(0, [1, 2, 3], tau, dist, 1.0, 1.0)
        assert np.array_equal(p_set, p_seq)

    def test_zero_distance_raises(self):
        tau = np.ones((3, 3))
        dist = np.zeros((3, 3))
        with pytest.raises(DegenerateDistance):
            transition_probabilities(0, [1, 2], tau, dist, 1.0, 1.0)


class TestUpdatePheromone:
    def test_fixed_point_is_exact(self):
        rng = np.random.default_rng(44)
        tau = rng.uniform(0.01, 3.0, size=(7, 7))
        out = update_pheromone(tau, 0.15, tau.copy())
        assert np.array_equal(out, tau)

    def test_decay_from_one(self):
        out = update_pheromone(np.array([[1.0]]), 0.15, np.array([[0.0]]))
        assert out[0, 0] == 0.85

    def test_reinforce_from_one(self):
        out = update_pheromone(np.array([[1.0]]), 0.15, np.array([[2.0]]))
        assert out[0, 0] == pytest.approx(1.15, abs=1e-15)

    def test_repeated_decay_matches_power(self):
        rng = np.random.default_rng(45)
        tau0 = rng.uniform(0.5, 2.0, size=(5, 5))
        tau = tau0.copy()
        zero = np.zeros_like(tau)
        for k in range(1, 61):
            tau = update_pheromone(tau, 0.15, zero)
            expected = tau0 * (1.0 - 0.15) ** k
            assert np.max(np.abs(tau - expected) / expected) <= 1e-12

    def test_floor_applied(self):
        tau = np.full((2, 2), 1e-12)
        out = update_pheromone(tau, 0.5, np.zeros((2, 2)))
        assert np.all(out == PHEROMONE_FLOOR)

    def test_symmetry_preserved(self):
        rng = np.random.default_rng(46)
        tau = symmetric_matrix(rng.uniform(0.1, 1.0, size=(6, 6)))
        dep = symmetric_matrix(rng.uniform(0.0, 1.0, size=(6, 6)))
        out = update_pheromone(tau, 0.3, dep)
        assert np.array_equal(out, out.T)

    def test_rho_range_enforced(self):
        tau = np.ones((2, 2))
        for rho in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                update_pheromone(tau, rho, tau)


class TestTourLength:
    def test_equilateral_triangle(self):
        dist = symmetric_matrix([[0, 1000.0, 1000.0],
                                 [1000.0, 0, 1000.0],
                                 [1000.0, 1000.0, 0]])
        assert tour_length([0, 1, 2], dist) == 3000.0

    def test_square_perimeter_beats_crossing(self):
        # unit square corners 0-1-2-3 around the perimeter
        s, d = 100.0, 100.0 * math.sqrt(2.0)
        dist = symmetric_matrix([[0, s, d, s],
                                 [s, 0, s, d],
                                 [d, s, 0, s],
                                 [s, d, s, 0]])
        perimeter = tour_length([0, 1, 2, 3], dist)
        crossing = tour_length([0, 2, 1, 3], dist)
        assert perimeter == pytest.approx(400.0, rel=1e-12)
        assert crossing > perimeter

    def test_rotation_and_reversal_exact(self):
        rng = np.random.default_rng(47)
        stops = random_stops(rng, 7)
        dist = geo.pairwise_distance_m(stops)
        order = np.array([3, 0, 6, 1, 5, 2, 4])
        base = tour_length(order, dist)
        assert tour_length(np.roll(order, 2), dist) == base
        assert tour_length(order[::-1], dist) == base

    def test_rejects_non_permutation(self):
        dist = np.zeros((3, 3))
        with pytest.raises(ValueError):
            tour_length([0, 1, 1], dist)


class TestConstructTour:
    def test_two_stops(self):
        rng = np.random.default_rng(48)
        dist = symmetric_matrix([[0, 750.0], [750.0, 0]])
        tau = np.ones((2, 2))
        tour = construct_tour(rng, 0, tau, dist, 1.0, 1.0)
        assert tour.order.tolist() == [0, 1]
        assert tour.length_m == 1500.0

    def test_three_stops_all_variants_same_length(self):
        rng = np.random.default_rng(49)
        stops = random_stops(rng, 3)
        dist = geo.pairwise_distance_m(stops)
        tau = np.ones((3, 3))
        lengths = set()
        for start in range(3):
            for _ in range(4):
                tour = construct_tour(rng, start, tau, dist, 1.0, 1.0)
                lengths.add(tour.length_m)
        assert len(lengths) == 1

    def test_uniform_sampling_over_undirected_cycles(self):
        # alpha = beta = 0 makes every next-stop choice uniform, so the 60
        # undirected 6-stop cycles must come out uniform (chi-squared).
        rng = np.random.default_rng(50)
        n, trials = 6, 10000
        stops = random_stops(rng, n)
        dist = geo.pairwise_distance_m(stops)
        tau = np.ones((n, n))
        counts = {}
        for _ in range(trials):
            tour = construct_tour(rng, 0, tau, dist, 0.0, 0.0)
            order = tour.order.tolist()
            i = order.index(0)
            rotated = order[i:] + order[:i]
            if rotated[1] > rotated[-1]:
                rotated = [rotated[0]] + rotated[1:][::-1]
            counts[tuple(rotated)] = counts.get(tuple(rotated), 0) + 1
        n_cycles = math.factorial(n - 1) // 2
        assert len(counts) == n_cycles
        observed = np.array(list(counts.values()))
        chi2 = ((observed - trials / n_cycles) ** 2 / (trials / n_cycles)).sum()
        p_value = stats.chi2.sf(chi2, df=n_cycles - 1)
        assert p_value > 0.001


class TestBruteForce:
    def test_three_stops_unique_cycle(self):
        rng = np.random.default_rng(51)
        stops = random_stops(rng, 3)
        tour = brute_force_tsp(stops)
        assert tour.order.tolist() == [0, 1, 2]

    def test_thin_rectangle_perimeter(self):
        # corners of a 2000 x 50 m rectangle; optimal tour never crosses
        origin = ORIGIN
        planar = np.array([[0, 0], [2000.0, 0], [2000.0, 50.0], [0, 50.0]])
        stops = geo.unproject_local(origin, planar)
        tour = brute_force_tsp(stops)
        assert tour.length_m == pytest.approx(4100.0, rel=1e-3)
        idx = tour.order.tolist()
        pos = idx.index(0)
        ring = idx[pos:] + idx[:pos]
        assert ring in ([0, 1, 2, 3], [0, 3, 2, 1])

    def test_beats_random_permutations(self):
        rng = np.random.default_rng(52)
        stops = random_stops(rng, 9)
        dist = geo.pairwise_distance_m(stops)
        best = brute_force_tsp(stops)
        for _ in range(10000):
            perm = rng.permutation(9)
            assert best.length_m <= tour_length(perm, dist) * (1 + 1e-12)

    def test_instance_too_large(self):
        rng = np.random.default_rng(53)
        with pytest.raises(InstanceTooLarge):
            brute_force_tsp(random_stops(rng, 12))

    def test_too_few_stops(self):
        rng = np.random.default_rng(54)
        with pytest.raises(TooFewStops):
            brute_force_tsp(random_stops(rng, 2))

    def test_deterministic_tie_break_on_square(self):
        planar = np.array([[0, 0], [1000.0, 0], [1000.0, 1000.0],
                           [0, 1000.0]])
        stops = geo.unproject_local(ORIGIN, planar)
        tour = brute_force_tsp(stops)
        # both perimeter directions tie; lexicographically smaller kept
        assert tour.order.tolist() == [0, 1, 2, 3]


class TestAcoSolve:
    def test_three_stops_returns_unique_cycle(self):
        rng = np.random.default_rng(55)
        stops = random_stops(rng, 3)
        best, history = aco_solve(stops, n_iterations=5, n_ants=4, seed=0)
        oracle = brute_force_tsp(stops)
        assert best.length_m == oracle.length_m
        assert len(history) == 5

    def test_eight_stops_on_circle_finds_perimeter(self):
        theta = np.linspace(0.0, 2 * np.pi, 8, endpoint=False)
        planar = 900.0 * np.stack([np.cos(theta), np.sin(theta)], axis=1)
        stops = geo.unproject_local(ORIGIN, planar)
        oracle = brute_force_tsp(stops)
        best, _ = aco_solve(stops, n_iterations=200, seed=1)
        assert best.length_m == pytest.approx(oracle.length_m, rel=1e-12)

    def test_deterministic_for_seed(self):
        rng = np.random.default_rng(56)
        stops = random_stops(rng, 7)
        a, hist_a = aco_solve(stops, n_iterations=40, seed=99)
        b, hist_b = aco_solve(stops, n_iterations=40, seed=99)
        assert np.array_equal(a.order, b.order)
        assert a.length_m == b.length_m
        assert hist_a == hist_b

    def test_history_monotone_and_bounded_by_oracle(self):
        rng = np.random.default_rng(57)
        stops = random_stops(rng, 8)
        oracle = brute_force_tsp(stops)
        best, history = aco_solve(stops, n_iterations=120, seed=5)
        assert all(a >= b for a, b in zip(history, history[1:]))
        assert history[-1] == best.length_m
        assert best.length_m >= oracle.length_m * (1 - 1e-12)

    def test_too_few_stops(self):
        rng = np.random.default_rng(58)
        with pytest.raises(TooFewStops):
            aco_solve(random_stops(rng, 2))

    def test_duplicate_stops_rejected(self):
        stops = np.array([ORIGIN, ORIGIN, ORIGIN + [0.01, 0.0]])
        with pytest.raises(DuplicateStops):
            aco_solve(stops)

    def test_parameter_validation(self):
        rng = np.random.default_rng(59)
        stops = random_stops(rng, 4)
        with pytest.raises(ValueError):
            aco_solve(stops, rho=1.0)
        with pytest.raises(ValueError):
            aco_solve(stops, alpha=-1.0)
        with pytest.raises(ValueError):
            aco_solve(stops, n_ants=0)


class TestAntColonyTSPEstimator:
    def test_fit_sets_attributes(self):
        rng = np.random.default_rng(60)
        stops = random_stops(rng, 6)
        est = AntColonyTSP(n_iterations=30, random_state=7)
        assert est.fit(stops) is est
        assert sorted(est.best_order_.tolist()) == list(range(6))
        assert est.best_length_m_ > 0
        assert len(est.history_) == 30

    def test_default_parameters(self):
        params = AntColonyTSP().get_params()
        assert params["alpha"] == 4.0
        assert params["beta"] == 1.0
        assert params["rho"] == 0.15
        assert params["n_ants"] == 30
        assert params["n_iterations"] == 500

    def test_clone_keeps_params(self):
        est = AntColonyTSP(alpha=2.0, random_state=3)
        assert clone(est).get_params() == est.get_params()
