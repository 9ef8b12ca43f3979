"""
Tests for the N-body integrator.

Run with: python -m pytest dynamics/tests/test_integrator.py -v
"""

import numpy as np
import pytest

from core.exceptions import BlowUpError, SingularConfigurationError, ValidationError
from dynamics import IntegratorControls, adaptive_dt, record_times, rhs, simulate, two_body_exact
from kernels import KernelSpec, Orientation, mollify, scale
from particles import ParticleConfig


@pytest.fixture
def coulomb_2d():
    return KernelSpec.power_law(alpha=1.0, dimension=2)


@pytest.fixture
def spread_config():
    # well separated points on a jittered grid
    rng = np.random.default_rng(21)
    grid = np.stack(np.meshgrid(np.arange(4.0), np.arange(3.0)), axis=-1).reshape(-1, 2)
    return ParticleConfig(grid + 0.1 * rng.random(grid.shape))


def pair_config(dim, r0=1.0):
    positions = np.zeros((2, dim))
    positions[1, 0] = r0
    return ParticleConfig(positions)


class TestRhs:

    def test_two_body_velocities(self, coulomb_2d):
        v = rhs(pair_config(2), coulomb_2d)
        np.testing.assert_allclose(v, [[-0.5, 0.0], [0.5, 0.0]], rtol=1e-15)

    def test_zero_kernel(self, spread_config):
        assert np.array_equal(rhs(spread_config, KernelSpec.zero(2)), np.zeros((12, 2)))

    def test_momentum_free(self):
        rng = np.random.default_rng(3)
        config = ParticleConfig(rng.random((60, 3)))
        v = rhs(config, KernelSpec.power_law(alpha=0.8, dimension=3))
        assert np.all(np.abs(v.sum(axis=0)) <= 1e-12 * np.abs(v).sum())

    def test_coincident_pair_is_named(self, coulomb_2d):
        config = ParticleConfig([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(SingularConfigurationError) as exc:
            rhs(config, coulomb_2d)
        assert exc.value.details["pair"] == [0, 2]
        assert exc.value.exit_code == 3

    def test_mollified_kernel_allows_coincidence(self, coulomb_2d):
        config = ParticleConfig([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
        v = rhs(config, mollify(coulomb_2d, 0.1))
        assert np.all(np.isfinite(v))

    def test_dimension_mismatch(self, coulomb_2d):
        with pytest.raises(ValidationError):
            rhs(pair_config(3), coulomb_2d)

    def test_independent_of_workers(self):
        rng = np.random.default_rng(4)
        config = ParticleConfig(rng.random((900, 2)))
        kernel = KernelSpec.power_law(alpha=0.3, dimension=2)
        assert np.array_equal(rhs(config, kernel, workers=1), rhs(config, kernel, workers=4))


class TestAdaptiveDt:

    def test_formula(self, coulomb_2d):
        controls = IntegratorControls(dt_max=1.0, eta=0.1)
        assert adaptive_dt(pair_config(2), coulomb_2d, controls, c_k=1.0) == pytest.approx(0.1)

    def test_cap(self, coulomb_2d):
        controls = IntegratorControls(dt_max=0.05)
        assert adaptive_dt(pair_config(2, r0=1e6), coulomb_2d, controls) == 0.05

    def test_floor(self, coulomb_2d):
        controls = IntegratorControls(d_floor=1.0)
        with pytest.raises(BlowUpError):
            adaptive_dt(pair_config(2, r0=1.0), coulomb_2d, controls)

    def test_zero_kernel_uses_cap(self):
        controls = IntegratorControls(dt_max=0.2)
        assert adaptive_dt(pair_config(2, r0=1e-9), KernelSpec.zero(2), controls) == 0.2

    def test_invalid_controls(self):
        with pytest.raises(ValidationError):
            IntegratorControls(eta=1.5)
        with pytest.raises(ValidationError):
            IntegratorControls(scheme="euler")


class TestSimulate:

    # ==========================================================================
    # Closed-form oracle
    # ==========================================================================

    @pytest.mark.parametrize("dim,alpha", [(2, 0.5), (3, 1.0)])
    def test_two_body_closed_form(self, dim, alpha):
        kernel = KernelSpec.power_law(alpha=alpha, dimension=dim)
        trajectory = simulate(pair_config(dim), kernel, 1.0, IntegratorControls())
        final = trajectory.final.positions
        separation = np.linalg.norm(final[1] - final[0])
        assert separation == pytest.approx(two_body_exact(1.0, alpha, 2, 1.0), rel=1e-6)

    def test_separation_is_monotone(self):
        kernel = KernelSpec.power_law(alpha=0.5, dimension=2)
        trajectory = simulate(pair_config(2, r0=0.2), kernel, 1.0, IntegratorControls())
        separations = [np.linalg.norm(c.positions[1] - c.positions[0]) for c in trajectory.configs]
        assert all(a <= b for a, b in zip(separations, separations[1:]))

    def test_fourth_order_convergence(self, coulomb_2d):
        exact = two_body_exact(1.0, 1.0, 2, 1.0)
        errors = []
        for dt_max in (0.1, 0.05):
            controls = IntegratorControls(dt_max=dt_max, eta=0.99, record_every=1.0)
            final = simulate(pair_config(2), coulomb_2d, 1.0, controls).final.positions
            errors.append(abs(np.linalg.norm(final[1] - final[0]) - exact))
        assert 16.0 / 3.0 <= errors[0] / errors[1] <= 16.0 * 3.0

    # ==========================================================================
    # Sampling and conservation
    # ==========================================================================

    def test_record_times(self):
        assert record_times(1.0, 0.25) == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert record_times(0.3, 0.25) == [0.0, 0.25, 0.3]

    def test_samples_hit_record_times(self, spread_config):
        kernel = KernelSpec.power_law(alpha=0.5, dimension=2)
        trajectory = simulate(spread_config, kernel, 0.35, IntegratorControls(record_every=0.1))
        assert trajectory.sample_times == record_times(0.35, 0.1)
        assert trajectory.sample_times[-1] == 0.35
        assert all(c.time == t for c, t in zip(trajectory.configs, trajectory.sample_times))
        assert sum(trajectory.step_log) == pytest.approx(0.35, rel=1e-12)

    def test_zero_kernel_is_static(self, spread_config):
        trajectory = simulate(spread_config, KernelSpec.zero(2), 1.0)
        for config in trajectory.configs:
            assert np.array_equal(config.positions, spread_config.positions)

    def test_center_of_mass_conserved(self, spread_config):
        kernel = KernelSpec.power_law(alpha=0.5, dimension=2, orientation=Orientation.ROTATIONAL)
        trajectory = simulate(spread_config, kernel, 1.0)
        drift = np.abs(trajectory.positions().sum(axis=1) - spread_config.positions.sum(axis=0))
        assert drift.max() <= 1e-9 * spread_config.n

    def test_time_reversal(self, spread_config):
        kernel = KernelSpec.power_law(alpha=0.5, dimension=2)
        forward = simulate(spread_config, kernel, 0.5)
        backward = simulate(forward.final, scale(kernel, -1.0), 0.5)
        np.testing.assert_allclose(backward.final.positions, spread_config.positions, rtol=1e-5, atol=1e-7)

    def test_diagnostics_recorded(self, spread_config):
        kernel = KernelSpec.power_law(alpha=0.5, dimension=2)
        controls = IntegratorControls(diagnostic_delta=0.5)
        trajectory = simulate(spread_config, kernel, 0.2, controls)
        report = trajectory.diagnostics[-1]
        assert report.time == 0.2
        assert report.cutoff_value > 0
        assert report.d_min1 >= report.d_min

    # ==========================================================================
    # Aborts
    # ==========================================================================

    def test_coincident_start_aborts_with_trajectory(self, coulomb_2d):
        config = ParticleConfig([[0.0, 0.0], [1.0, 0.0], [1.0, 0.0]])
        with pytest.raises(SingularConfigurationError) as exc:
            simulate(config, coulomb_2d, 1.0)
        assert exc.value.trajectory.status == "aborted"
        assert exc.value.trajectory.sample_times == [0.0]

    def test_collapse_hits_floor(self):
        kernel = KernelSpec.power_law(alpha=0.5, dimension=2, orientation=Orientation.ATTRACTIVE)
        controls = IntegratorControls(d_floor=0.1)
        with pytest.raises(BlowUpError) as exc:
            simulate(pair_config(2), kernel, 10.0, controls)
        partial = exc.value.trajectory
        # r^1.5 = 1 - 1.5 t reaches 0.1^1.5 before t = 2/3
        assert 0.5 <= partial.sample_times[-1] < 2.0 / 3.0
        assert partial.status == "aborted"

    def test_rejects_nonpositive_horizon(self, coulomb_2d):
        with pytest.raises(ValidationError):
            simulate(pair_config(2), coulomb_2d, 0.0)


class TestTwoBodyExact:

    def test_values(self):
        assert two_body_exact(1.0, 1.0, 2, 1.0) == pytest.approx(3 ** 0.5)
        assert two_body_exact(0.7, 0.5, 10, 0.0) == 0.7
        assert two_body_exact(1.0, 0.0, 2, 1.0) == 2.0

    def test_invalid(self):
        with pytest.raises(ValidationError):
            two_body_exact(0.0, 1.0, 2, 1.0)
