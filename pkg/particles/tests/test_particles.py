"""
Tests for configuration statistics.

Run with: python -m pytest particles/tests/test_particles.py -v
"""

import math

import numpy as np
import pytest
from scipy.spatial.distance import cdist

from core.exceptions import ValidationError
from particles import (
    ParticleConfig,
    compensated_sum,
    cutoff_sum,
    distance_report,
    nearest_neighbors,
    neighbor_index,
)


@pytest.fixture
def line_config():
    return ParticleConfig([[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]])


def random_config(n, d, seed):
    rng = np.random.default_rng(seed)
    return ParticleConfig(rng.random((n, d)))


def brute_force_report(positions):
    """O(N^2) nearest neighbour and O(N^3)-style d_min,1 enumeration."""
    n = len(positions)
    dist = cdist(positions, positions)
    nn = []
    for i in range(n):
        best = min((j for j in range(n) if j != i), key=lambda j: (dist[i, j], j))
        nn.append(best)
    d_min1 = min(dist[i, j] for i in range(n) for j in range(n) if j != i and j != nn[i])
    return np.array(nn), d_min1


class TestParticleConfig:

    def test_positions_read_only(self, line_config):
        with pytest.raises(ValueError):
            line_config.positions[0, 0] = 5.0

    def test_input_is_copied(self):
        raw = np.zeros((3, 2))
        config = ParticleConfig(raw)
        raw[0, 0] = 1.0
        assert config.positions[0, 0] == 0.0

    @pytest.mark.parametrize("positions", [
        [[0.0, 0.0]],
        [[0.0, np.nan], [1.0, 0.0]],
        [0.0, 1.0],
    ])
    def test_invalid_positions(self, positions):
        with pytest.raises(ValidationError):
            ParticleConfig(positions)

    def test_negative_time(self):
        with pytest.raises(ValidationError):
            ParticleConfig([[0.0], [1.0]], time=-1.0)


class TestDistanceReport:

    # ==========================================================================
    # Hand-computed examples
    # ==========================================================================

    def test_three_points_on_a_line(self, line_config):
        report = distance_report(line_config, 1.5)
        assert report.d_min == 1.0
        assert report.nn_index.tolist() == [1, 0, 1]
        assert report.d_min1 == 2.0
        assert report.close_set.tolist() == [0, 1]
        assert report.close_mass == pytest.approx(2 / 3)

    def test_two_points_flag_d_min1(self):
        report = distance_report(ParticleConfig([[0.0, 0.0], [0.0, 2.0]]), 0.1)
        assert report.d_min == 2.0
        assert math.isinf(report.d_min1)
        assert not report.d_min1_defined

    def test_coincident_points(self):
        report = distance_report(ParticleConfig([[0.0] * 3, [0.0] * 3, [1.0] * 3]), 0.5)
        assert report.d_min == 0.0
        assert report.d_min1 == pytest.approx(math.sqrt(3.0), rel=1e-15)

    def test_close_set_is_strict(self, line_config):
        assert distance_report(line_config, 1.0).close_set.tolist() == []

    def test_ties_go_to_smallest_index(self):
        config = ParticleConfig([[0.0, 0.0], [-1.0, 0.0], [1.0, 0.0]])
        indices, _ = nearest_neighbors(config, 2)
        assert indices[0].tolist() == [1, 2]

    def test_negative_delta(self, line_config):
        with pytest.raises(ValidationError):
            distance_report(line_config, -0.1)

    # ==========================================================================
    # Oracle and invariance
    # ==========================================================================

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 60))
        d = int(rng.integers(1, 4))
        config = random_config(n, d, seed)
        nn, d_min1 = brute_force_report(config.positions)
        report = distance_report(config, 0.1)
        assert report.nn_index.tolist() == nn.tolist()
        assert report.d_min1 == d_min1
        assert report.d_min1 >= report.d_min

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(100, 112))
    def test_matches_brute_force_up_to_500(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(60, 501))
        d = int(rng.integers(1, 4))
        config = random_config(n, d, seed)
        nn, d_min1 = brute_force_report(config.positions)
        delta = float(rng.uniform(0.0, 0.1))
        report = distance_report(config, delta)
        assert report.nn_index.tolist() == nn.tolist()
        assert report.d_min1 == d_min1
        dist = cdist(config.positions, config.positions)
        np.fill_diagonal(dist, np.inf)
        assert report.d_min == dist.min()
        assert report.close_set.tolist() == np.flatnonzero(dist.min(axis=1) < delta).tolist()

    def test_independent_of_workers(self):
        config = random_config(700, 2, 3)
        serial = distance_report(config, 0.01, workers=1)
        parallel = distance_report(config, 0.01, workers=4)
        assert np.array_equal(serial.nn_dist, parallel.nn_dist)
        assert serial.d_min1 == parallel.d_min1

    def test_label_permutation_invariance(self):
        config = random_config(80, 3, 11)
        permuted = ParticleConfig(config.positions[np.random.default_rng(1).permutation(80)])
        a, b = distance_report(config, 0.05), distance_report(permuted, 0.05)
        assert (a.d_min, a.d_min1, a.close_mass) == (b.d_min, b.d_min1, b.close_mass)

    def test_close_set_monotone_in_delta(self):
        config = random_config(200, 2, 5)
        small = set(distance_report(config, 0.01).close_set.tolist())
        large = set(distance_report(config, 0.03).close_set.tolist())
        assert small <= large


class TestCutoffSum:

    def test_three_points_on_a_line(self, line_config):
        result = cutoff_sum(line_config, 1.0, 1.5)
        np.testing.assert_allclose(result.per_particle, [1 / 3, 1 / 2, 5 / 6], rtol=1e-15)
        assert result.value == pytest.approx(5 / 6, rel=1e-15)

    def test_delta_above_diameter(self, line_config):
        assert cutoff_sum(line_config, 1.0, 10.0).value == 0.0

    def test_single_term(self):
        assert cutoff_sum(ParticleConfig([[0.0, 0.0], [2.0, 0.0]]), 2.0, 1.0).value == 0.25

    def test_strict_inequality(self, line_config):
        # d = 2 equals delta and is excluded
        result = cutoff_sum(line_config, 1.0, 2.0)
        np.testing.assert_allclose(result.per_particle, [1 / 3, 0.0, 1 / 3])

    def test_matches_direct_enumeration_bitwise(self):
        config = random_config(300, 2, 7)
        dist = cdist(config.positions, config.positions)
        expected = []
        for i in range(config.n):
            terms = np.zeros(config.n)
            for j in range(config.n):
                if dist[i, j] > 0.02:
                    terms[j] = dist[i, j] ** -1.5
            expected.append(compensated_sum(terms))
        result = cutoff_sum(config, 1.5, 0.02, workers=3)
        assert np.array_equal(result.per_particle, np.array(expected))

    @pytest.mark.slow
    @pytest.mark.parametrize("n,d,beta,delta", [
        (500, 1, 0.5, 0.01),
        (500, 2, 1.2, 0.03),
        (500, 3, 1.9, 0.1),
        (437, 2, 0.3, 0.0),
    ])
    def test_matches_direct_enumeration_up_to_500(self, n, d, beta, delta):
        config = random_config(n, d, n + d)
        dist = cdist(config.positions, config.positions)
        expected = []
        for i in range(n):
            terms = np.zeros(n)
            for j in range(n):
                if j != i and dist[i, j] > delta:
                    terms[j] = dist[i, j] ** -beta
            expected.append(compensated_sum(terms))
        result = cutoff_sum(config, beta, delta, workers=2)
        assert np.array_equal(result.per_particle, np.array(expected))

    def test_monotone_in_delta(self):
        config = random_config(150, 3, 2)
        assert cutoff_sum(config, 1.2, 0.01).value >= cutoff_sum(config, 1.2, 0.05).value

    def test_scaling(self):
        config = random_config(100, 2, 4)
        lam, beta, delta = 3.0, 1.3, 0.05
        scaled = ParticleConfig(lam * config.positions)
        assert cutoff_sum(scaled, beta, lam * delta).value == pytest.approx(
            lam ** -beta * cutoff_sum(config, beta, delta).value, rel=1e-12,
        )

    @pytest.mark.parametrize("beta,delta", [(0.0, 0.1), (1.0, -0.1)])
    def test_invalid_arguments(self, line_config, beta, delta):
        with pytest.raises(ValidationError):
            cutoff_sum(line_config, beta, delta)


class TestCompensatedSum:

    def test_recovers_cancelled_terms(self):
        values = np.array([1e16, 1.0, -1e16, 1.0])
        assert compensated_sum(values) == 2.0

    def test_rows(self):
        values = np.arange(12.0).reshape(3, 4)
        assert compensated_sum(values, axis=1).tolist() == [6.0, 22.0, 38.0]

    def test_empty(self):
        assert compensated_sum(np.zeros((2, 0)), axis=1).tolist() == [0.0, 0.0]


class TestNeighborIndex:

    @pytest.mark.parametrize("radius,expected", [
        (1.2, [(0, 1)]),
        (3.5, [(0, 1), (0, 2), (1, 2)]),
        (0.5, []),
    ])
    def test_line_examples(self, line_config, radius, expected):
        index = neighbor_index(line_config, radius)
        assert [tuple(pair) for pair in index.pairs.tolist()] == expected

    def test_boundary_is_inclusive(self, line_config):
        assert len(neighbor_index(line_config, 2.0)) == 2

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force(self, seed):
        config = random_config(400, 3, seed)
        dist = cdist(config.positions, config.positions)
        radius = 0.08
        expected = [(i, j) for i in range(config.n) for j in range(i + 1, config.n) if dist[i, j] <= radius]
        index = neighbor_index(config, radius)
        assert [tuple(pair) for pair in index.pairs.tolist()] == expected
        adjacency = index.adjacency()
        assert all(i not in adjacency[i].tolist() for i in range(config.n))

    @pytest.mark.parametrize("radius,expected", [(1.0, 40), (math.sqrt(2.0), 72), (0.999999, 0)])
    def test_lattice_distances_at_the_radius(self, radius, expected):
        grid = np.stack(np.meshgrid(np.arange(5.0), np.arange(5.0)), axis=-1).reshape(-1, 2)
        index = neighbor_index(ParticleConfig(grid), radius)
        assert len(index) == expected
        assert np.all(index.distances <= radius)

    @pytest.mark.slow
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_matches_brute_force_up_to_500(self, d):
        config = random_config(500, d, 40 + d)
        dist = cdist(config.positions, config.positions)
        radius = 0.5 * 500 ** (-1.0 / d)
        expected = [(i, j) for i in range(config.n) for j in range(i + 1, config.n) if dist[i, j] <= radius]
        index = neighbor_index(config, radius)
        assert [tuple(pair) for pair in index.pairs.tolist()] == expected

    def test_rejects_nonpositive_radius(self, line_config):
        with pytest.raises(ValidationError):
            neighbor_index(line_config, 0.0)
