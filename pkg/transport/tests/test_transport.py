"""
Tests for exact discrete optimal transport.

Run with: python -m pytest transport/tests/test_transport.py -v
"""

import math

import numpy as np
import pytest

from core.exceptions import ProblemTooLargeError, ValidationError
from transport import (
    PointCloud,
    brute_force_wasserstein,
    empirical_distance,
    plan_rows,
    wasserstein,
    wasserstein_inf,
    wasserstein_p,
)


@pytest.fixture
def square_pair():
    return PointCloud([[0.0, 0.0], [1.0, 0.0]]), PointCloud([[0.0, 0.0], [0.0, 1.0]])


def random_cloud(rng, m, d):
    return PointCloud(rng.random((m, d)))


class TestPointCloud:

    def test_uniform_default(self):
        cloud = PointCloud([[0.0], [1.0], [2.0], [3.0]])
        assert cloud.is_uniform
        assert cloud.weights.tolist() == [0.25] * 4

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            PointCloud([[0.0], [1.0]], [0.5, 0.6])

    def test_negative_weight(self):
        with pytest.raises(ValidationError):
            PointCloud([[0.0], [1.0]], [1.5, -0.5])

    def test_one_dimensional_points(self):
        assert PointCloud([0.0, 1.0, 2.0]).dim == 1


class TestWasserstein:

    # ==========================================================================
    # Hand examples
    # ==========================================================================

    def test_single_pair(self):
        result = wasserstein_p(PointCloud([[0.0, 0.0]]), PointCloud([[1.0, 0.0]]), 1)
        assert result.value == 1.0
        assert result.plan == [(0, 0, 1.0)]
        assert result.optimal

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.5, math.inf])
    def test_identity(self, p):
        cloud = PointCloud(np.random.default_rng(0).random((6, 2)))
        assert wasserstein(cloud, cloud, p).value == 0.0

    def test_two_point_p2(self, square_pair):
        assert wasserstein_p(*square_pair, 2).value == pytest.approx(1.0, abs=1e-15)

    def test_two_point_bottleneck(self, square_pair):
        assert wasserstein_inf(*square_pair).value == 1.0

    def test_bottleneck_single_pair(self):
        assert wasserstein_inf(PointCloud([[0.0, 0.0]]), PointCloud([[7.0, 0.0]])).value == 7.0

    def test_bottleneck_requires_equal_sizes(self):
        with pytest.raises(ValidationError):
            wasserstein_inf(PointCloud([[0.0], [1.0]]), PointCloud([[0.0]]))

    def test_bottleneck_plan_on_tied_costs(self):
        # all four distances are sqrt(2)
        a = PointCloud([[0.0, 0.0], [2.0, 0.0]])
        b = PointCloud([[1.0, 1.0], [1.0, -1.0]])
        result = wasserstein_inf(a, b)
        assert result.value == math.sqrt(2.0)
        assert result.plan == [(0, 0, 0.5), (1, 1, 0.5)]

    def test_bottleneck_plan_prefers_nearest_target(self):
        # the far pair fixes W_inf = 3; below it rows 0 and 1 could swap
        a = PointCloud([[0.0, 0.0], [0.1, 0.0], [5.0, 0.0]])
        b = PointCloud([[0.0, 0.05], [0.1, 0.05], [5.0, 3.0]])
        result = wasserstein_inf(a, b)
        assert result.value == 3.0
        assert [(i, j) for i, j, _ in result.plan] == [(0, 0), (1, 1), (2, 2)]

        reordered = wasserstein_inf(a, PointCloud(b.points[[2, 1, 0]]))
        assert [(i, j) for i, j, _ in reordered.plan] == [(0, 2), (1, 1), (2, 0)]

    def test_bottleneck_plan_on_lattice(self):
        grid = np.stack(np.meshgrid(np.arange(4.0), np.arange(4.0)), axis=-1).reshape(-1, 2)
        a, b = PointCloud(grid), PointCloud(grid + 0.5)
        result = wasserstein_inf(a, b)
        assert result.value == pytest.approx(math.sqrt(0.5), abs=1e-15)
        assert sorted(j for _, j, _ in result.plan) == list(range(16))
        # every point has the translated copy of itself at minimal distance
        assert [j for _, j, _ in result.plan] == list(range(16))
        assert result.plan == wasserstein_inf(a, b).plan

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            wasserstein_p(PointCloud([[0.0, 0.0]]), PointCloud([[0.0, 0.0, 0.0]]), 2)

    def test_p_below_one(self, square_pair):
        with pytest.raises(ValidationError):
            wasserstein(*square_pair, 0.5)

    # ==========================================================================
    # Weighted clouds
    # ==========================================================================

    def test_weighted_to_single_point(self):
        a = PointCloud([[0.0], [1.0]], [0.25, 0.75])
        result = wasserstein_p(a, PointCloud([[0.0]]), 1)
        assert result.value == pytest.approx(0.75, abs=1e-11)
        assert result.method == "network-simplex"
        assert result.mass_error_bound == 2 * 2.0 ** -40

    def test_unequal_sizes_duplicated_support(self):
        a = PointCloud([[0.0, 0.0], [1.0, 1.0]])
        b = PointCloud([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0]])
        assert wasserstein_p(a, b, 2).value == pytest.approx(0.0, abs=1e-12)

    def test_plan_marginals(self):
        rng = np.random.default_rng(3)
        a = PointCloud(rng.random((5, 2)), [0.1, 0.2, 0.3, 0.15, 0.25])
        b = random_cloud(rng, 3, 2)
        result = wasserstein_p(a, b, 2)
        row_mass = np.zeros(5)
        col_mass = np.zeros(3)
        for i, j, mass in result.plan:
            row_mass[i] += mass
            col_mass[j] += mass
        np.testing.assert_allclose(row_mass, a.weights, atol=1e-10)
        np.testing.assert_allclose(col_mass, b.weights, atol=1e-10)
        cost = sum(mass * np.sum((a.points[i] - b.points[j]) ** 2) for i, j, mass in result.plan)
        assert result.value ** 2 == pytest.approx(cost, rel=1e-12)

    def test_large_exponent_does_not_overflow(self):
        rng = np.random.default_rng(4)
        points = rng.random((5, 2)) * 1e40
        a = PointCloud(points)
        b = PointCloud(points + np.array([1e40, 0.0]))
        assert wasserstein_p(a, b, 10).value == pytest.approx(1e40, rel=1e-12)

    # ==========================================================================
    # Oracle and metric properties
    # ==========================================================================

    def test_matches_brute_force(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            m = int(rng.integers(1, 8))
            d = int(rng.integers(1, 4))
            p = [1.0, 2.0, math.inf][int(rng.integers(0, 3))]
            a, b = random_cloud(rng, m, d), random_cloud(rng, m, d)
            assert wasserstein(a, b, p).value == pytest.approx(brute_force_wasserstein(a, b, p), abs=1e-12)

    @pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
    def test_symmetry_and_triangle(self, p):
        rng = np.random.default_rng(8)
        for _ in range(20):
            a, b, c = (random_cloud(rng, 6, 2) for _ in range(3))
            ab, ba = wasserstein(a, b, p).value, wasserstein(b, a, p).value
            assert ab == pytest.approx(ba, abs=1e-12)
            assert ab <= wasserstein(a, c, p).value + wasserstein(c, b, p).value + 1e-10

    def test_monotone_in_p(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            a, b = random_cloud(rng, 7, 3), random_cloud(rng, 7, 3)
            values = [wasserstein(a, b, p).value for p in (1.0, 2.0, 4.0, math.inf)]
            assert all(x <= y + 1e-10 for x, y in zip(values, values[1:]))

    @pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
    def test_translation_invariance(self, p):
        rng = np.random.default_rng(10)
        a, b = random_cloud(rng, 7, 2), random_cloud(rng, 7, 2)
        shift = [0.3, -0.7]
        assert wasserstein(a.shifted(shift), b.shifted(shift), p).value == pytest.approx(
            wasserstein(a, b, p).value, abs=1e-12,
        )


class TestBruteForce:

    def test_monotone_matching_on_a_line(self):
        a = PointCloud([[0.0], [1.0], [2.0]])
        b = PointCloud([[0.5], [1.5], [2.5]])
        assert brute_force_wasserstein(a, b, 1) == pytest.approx(0.5)

    def test_single_point(self):
        assert brute_force_wasserstein(PointCloud([[0.0, 0.0]]), PointCloud([[3.0, 4.0]]), 2) == 5.0

    def test_refuses_large_instances(self):
        cloud = PointCloud(np.zeros((9, 1)))
        with pytest.raises(ProblemTooLargeError):
            brute_force_wasserstein(cloud, cloud, 1)


class TestEmpiricalDistance:

    @pytest.fixture
    def clouds(self):
        rng = np.random.default_rng(12)
        return PointCloud(rng.random((40, 2))), PointCloud(rng.random((160, 2)))

    def test_dense_estimator(self, clouds):
        result = empirical_distance(*clouds, 2)
        assert result.estimator == "dense"
        assert result.floor == pytest.approx(160 ** -0.5)
        assert result.value == pytest.approx(wasserstein_p(*clouds, 2).value)

    def test_bottleneck_subsamples(self, clouds):
        result = empirical_distance(*clouds, math.inf, seed=5, resamples=5)
        assert result.estimator == "subsampled"
        assert len(result.values) == 5
        assert result.value == float(np.median(result.values))

    def test_subsampled_independent_of_workers(self, clouds):
        serial = empirical_distance(*clouds, 2, seed=1, estimator="subsampled", resamples=4, workers=1)
        parallel = empirical_distance(*clouds, 2, seed=1, estimator="subsampled", resamples=4, workers=4)
        assert serial.values == parallel.values

    def test_plan_rows(self, square_pair):
        result = wasserstein_p(*square_pair, 2)
        rows = plan_rows(result, *square_pair)
        assert len(rows) == 2
        assert all(row[2] == 0.5 for row in rows)
