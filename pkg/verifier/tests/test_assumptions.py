"""
Tests for the hypothesis checks and the cut-off-sum bound.

Run with: python -m pytest verifier/tests/test_assumptions.py -v
"""

import math

import numpy as np
import pytest

from core.exceptions import ValidationError
from kernels import KernelSpec
from particles import ParticleConfig
from transport import PointCloud
from verifier import AssumptionThresholds, check_assumptions, check_cutoff_sum_bound
from verifier.services import absorbable_lhs, ball_count, cutoff_sum_bound_rhs, wp_condition


@pytest.fixture
def thresholds():
    return AssumptionThresholds(theta_sep=4.0, theta_small=0.25, conv_cutoff=1.0, wp_cutoff=1.0)


@pytest.fixture
def kernel_2d():
    return KernelSpec.power_law(alpha=0.3, dimension=2)


def shifted(config, offset=1e-3):
    return PointCloud(config.positions + offset)


def isolated_pair_config():
    """Pair at distance 1e-3, a third point 1e-2 away, 997 grid points far off."""
    cluster = np.array([[0.0, 0.0], [1e-3, 0.0], [-1e-2, 0.0]])
    grid = np.stack(np.meshgrid(np.arange(32.0), np.arange(32.0)), axis=-1).reshape(-1, 2)[:997]
    return ParticleConfig(np.vstack([cluster, grid + 10.0]))


class TestThresholdsModel:

    @pytest.mark.parametrize("overrides", [
        {"theta_sep": 0.5},
        {"theta_small": 0.0},
        {"theta_small": 1.5},
        {"conv_cutoff": 0.0},
        {"wp_cutoff": -1.0},
    ])
    def test_invalid(self, overrides):
        with pytest.raises(ValidationError):
            AssumptionThresholds(**overrides)


class TestCheckAssumptions:

    # ==========================================================================
    # Separation and smallness
    # ==========================================================================

    def test_vacuous_when_far_apart(self, kernel_2d, thresholds):
        config = ParticleConfig([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        report = check_assumptions(config, shifted(config), kernel_2d, 0.1, 2.0, thresholds)
        assert report.cond_strong1.passed and report.cond_strong1.value == math.inf
        assert report.cond_strong2.passed and report.cond_strong2.value == 0.0
        assert report.cond_strong1.checked == 0
        assert report.delta_ok

    def test_separation_failure(self, kernel_2d, thresholds):
        delta = 0.1
        config = ParticleConfig([[0.0, 0.0], [delta / 2, 0.0], [2 * delta, 0.0]])
        report = check_assumptions(config, shifted(config), kernel_2d, delta, 2.0, thresholds)
        # from the middle point the third one sits 1.5 delta away
        assert not report.cond_strong1.passed
        assert report.cond_strong1.value == pytest.approx(1.5, rel=1e-12)
        assert report.cond_strong1.checked == 2
        assert report.delta_ok

    def test_smallness_statistic(self, thresholds):
        config = isolated_pair_config()
        kernel = KernelSpec.power_law(alpha=1.0, dimension=2)
        report = check_assumptions(config, shifted(config), kernel, 5e-3, 2.0, thresholds)
        # 1 / (1000 * 1e-2 * 1e-3)
        assert report.cond_strong2.value == pytest.approx(100.0, rel=1e-9)
        assert not report.cond_strong2.passed
        assert report.cond_strong1.value == pytest.approx(2.0, rel=1e-9)

    def test_delta_above_d_min1_is_recorded(self, kernel_2d, thresholds):
        config = ParticleConfig([[0.0, 0.0], [0.1, 0.0], [0.3, 0.0]])
        report = check_assumptions(config, shifted(config), kernel_2d, 0.5, 2.0, thresholds)
        assert not report.delta_ok
        assert not report.all_passed
        assert report.conditions()["delta"] is False

    # ==========================================================================
    # Invariance and errors
    # ==========================================================================

    def test_permutation_and_translation_invariance(self, kernel_2d, thresholds):
        rng = np.random.default_rng(5)
        positions = rng.random((60, 2))
        reference = rng.random((60, 2))
        perm = rng.permutation(60)
        base = check_assumptions(ParticleConfig(positions), PointCloud(reference), kernel_2d, 0.02, 2.0, thresholds)
        moved = check_assumptions(
            ParticleConfig(positions[perm] + 3.0), PointCloud(reference + 3.0),
            kernel_2d, 0.02, 2.0, thresholds,
        )
        assert moved.d_min == pytest.approx(base.d_min, rel=1e-9)
        assert moved.w_p0 == pytest.approx(base.w_p0, rel=1e-9)
        assert moved.cond_strong1.value == pytest.approx(base.cond_strong1.value, rel=1e-9)
        assert moved.cond_strong2.value == pytest.approx(base.cond_strong2.value, rel=1e-9)
        assert moved.conditions() == base.conditions()

    def test_dimension_mismatch(self, kernel_2d):
        config = ParticleConfig([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(ValidationError):
            check_assumptions(config, PointCloud(np.zeros((3, 3))), kernel_2d, 0.1, 2.0)

    def test_report_serializes(self, kernel_2d, thresholds):
        config = ParticleConfig([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        payload = check_assumptions(config, shifted(config), kernel_2d, 0.1, 2.0, thresholds).to_dict()
        assert payload["cond_strong1"]["passed"] is True
        assert payload["thresholds"]["theta_sep"] == 4.0
        assert set(payload["conditions"]) == {"delta", "conv", "wp", "strong1", "strong2", "absorbable"}

    def test_absorbable_without_close_particles(self, kernel_2d, thresholds):
        config = ParticleConfig([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        report = check_assumptions(config, shifted(config), kernel_2d, 0.1, 2.0, thresholds)
        assert report.close_mass == 0.0
        assert report.cond_absorbable.value == 0.0
        assert report.cond_absorbable.passed


class TestWpCondition:

    def test_infinite_p_is_the_limit(self):
        args = dict(n=500, d=3, alpha=0.5, delta_n=0.01, w_p0=0.05, close_mass=0.02, d_min=1e-3)
        finite = wp_condition(p=1e7, **args)
        assert finite == pytest.approx(wp_condition(p=math.inf, **args), rel=1e-5)

    def test_no_close_particles(self):
        value = wp_condition(100, 2, 0.5, 0.1, 2.0, 0.04, 0.0, 0.05)
        expected = (0.04 ** (0.5 * 2 / 4)) / (100 ** 0.75 * 0.1 ** 1.5)
        assert value == pytest.approx(expected, rel=1e-12)

    def test_infinite_p_keeps_separation_term_without_close_particles(self):
        value = wp_condition(100, 3, 0.5, 0.1, math.inf, 0.04, 0.0, 0.05)
        expected = (0.04 ** 1.5 + (0.05 ** -0.5 / 100) ** 1.5) / (100 ** 0.5 * 0.1 ** 1.5)
        assert value == pytest.approx(expected, rel=1e-12)
        assert value > wp_condition(100, 3, 0.5, 0.1, math.inf, 0.0, 0.0, 0.05) > 0.0

    def test_infinite_p_with_coincident_particles(self):
        assert wp_condition(100, 3, 0.5, 0.1, math.inf, 0.04, 0.0, 0.0) == math.inf


class TestAbsorbableLhs:

    def test_finite_p_without_close_particles(self):
        assert absorbable_lhs(100, 0.5, 2.0, 0.0, 0.05) == 0.0

    def test_infinite_p_ignores_close_mass(self):
        expected = 0.05 ** -0.5 / 100
        assert absorbable_lhs(100, 0.5, math.inf, 0.0, 0.05) == pytest.approx(expected, rel=1e-12)
        assert absorbable_lhs(100, 0.5, math.inf, 0.3, 0.05) == pytest.approx(expected, rel=1e-12)

    def test_infinite_p_with_coincident_particles(self):
        assert absorbable_lhs(100, 0.5, math.inf, 0.0, 0.0) == math.inf


class TestCutoffSumBound:

    @pytest.fixture
    def cluster(self):
        return ParticleConfig([[0.0, 0.0], [0.1, 0.0], [5.0, 0.0]])

    def test_hand_computed_lhs(self, cluster):
        reference = PointCloud([[0.0, 0.1], [0.1, 0.1], [5.0, 0.1]])
        bound = check_cutoff_sum_bound(cluster, reference, 1.0, 0.5, 2.0, rho_inf=1.0)
        assert bound.lhs == pytest.approx((1 / 5.0 + 1 / 4.9) / 3, rel=1e-14)
        assert bound.m_count == 2
        assert bound.ratio == pytest.approx(bound.lhs / bound.rhs)

    def test_delta_beyond_diameter(self, cluster):
        bound = check_cutoff_sum_bound(cluster, PointCloud(cluster.positions), 1.0, 10.0, 2.0, rho_inf=1.0)
        assert bound.lhs == 0.0
        assert bound.ratio == 0.0
        assert bound.m_count == 3

    def test_infinite_p(self, cluster):
        reference = PointCloud(cluster.positions + 0.05)
        bound = check_cutoff_sum_bound(cluster, reference, 1.0, 0.5, math.inf, rho_inf=2.0)
        assert bound.rhs == pytest.approx(cutoff_sum_bound_rhs(1.0, 2, math.inf, 3, 0.5, 2, 2.0, bound.w_p))

    @pytest.mark.parametrize("beta", [0.0, 2.0, 3.0])
    def test_beta_outside_range(self, cluster, beta):
        with pytest.raises(ValidationError):
            check_cutoff_sum_bound(cluster, PointCloud(cluster.positions), beta, 0.5, 2.0, rho_inf=1.0)

    def test_lhs_nonincreasing_in_delta(self):
        rng = np.random.default_rng(8)
        config = ParticleConfig(rng.random((80, 2)))
        reference = PointCloud(rng.random((80, 2)))
        values = [check_cutoff_sum_bound(config, reference, 1.3, delta, 2.0, 1.0).lhs for delta in (0.01, 0.05, 0.2)]
        assert values[0] >= values[1] >= values[2]

    def test_ball_count_includes_center(self, cluster):
        assert ball_count(cluster, 0.05) == 1
        assert ball_count(cluster, 0.2) == 2
