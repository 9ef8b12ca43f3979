"""
Tests for experiment spec validation.

Run with: python -m pytest experiments/tests/test_serializers.py -v
"""

import math

import pytest

from core.exceptions import ValidationError
from experiments.models import Mode
from experiments.serializers import spec_from_dict


@pytest.fixture
def simulate_spec():
    return {
        "mode": "simulate",
        "kernel": {"family": "power-law", "alpha": 0.5, "dimension": 2},
        "positions": [[0.0, 0.0], [1.0, 0.0]],
        "T": 1.0,
    }


@pytest.fixture
def verify_spec():
    return {
        "mode": "verify",
        "kernel": {"family": "power-law", "alpha": 0.3, "dimension": 2},
        "density": {"family": "uniform-cube", "dimension": 2},
        "n": 64,
        "T": 0.5,
        "p": 2,
    }


@pytest.fixture
def mc_spec():
    return {
        "mode": "mc-lemma",
        "which": "dmin-tail",
        "density": {"family": "uniform-cube", "dimension": 2},
        "n_list": [100, 50],
        "replicas": 30,
        "params": {"L": 2.0},
    }


class TestValidSpecs:

    def test_minimal_simulate(self, simulate_spec):
        spec = spec_from_dict(simulate_spec)
        assert spec.mode is Mode.SIMULATE
        assert spec.n == 2
        assert spec.dimension == 2
        assert spec.seed == 0
        assert spec.kernel.alpha == 0.5
        assert spec.controls is None

    def test_n_becomes_n_list(self, verify_spec):
        spec = spec_from_dict(verify_spec)
        assert spec.n_list == [64]
        assert spec.density.dimension == 2

    def test_p_accepts_inf(self, verify_spec):
        verify_spec["p"] = "inf"
        assert math.isinf(spec_from_dict(verify_spec).p)

    def test_nested_blocks(self, verify_spec):
        verify_spec["controls"] = {"scheme": "heun", "dt_max": 0.02}
        verify_spec["thresholds"] = {"theta_sep": 3.0}
        spec = spec_from_dict(verify_spec)
        assert spec.controls.scheme == "heun"
        assert spec.controls.dt_max == 0.02
        assert spec.thresholds.theta_sep == 3.0
        assert spec.thresholds.theta_small == 0.25

    def test_kernel_dimension_from_density(self, verify_spec):
        del verify_spec["kernel"]["dimension"]
        assert spec_from_dict(verify_spec).kernel.dimension == 2

    def test_mc_lemma(self, mc_spec):
        spec = spec_from_dict(mc_spec)
        assert spec.which == "dmin-tail"
        assert spec.params == {"L": 2.0}

    def test_spec_hash(self, simulate_spec):
        first = spec_from_dict(dict(simulate_spec)).spec_hash()
        again = spec_from_dict(dict(simulate_spec)).spec_hash()
        reseeded = spec_from_dict({**simulate_spec, "seed": 5}).spec_hash()
        assert first == again
        assert first != reseeded


class TestInvalidSpecs:

    # ==========================================================================
    # Unknown keys
    # ==========================================================================

    def test_unknown_top_level_key(self, simulate_spec):
        simulate_spec["colour"] = "red"
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(simulate_spec)
        assert excinfo.value.details["field"] == "colour"
        assert "Unknown key" in excinfo.value.message

    def test_unknown_nested_key(self, simulate_spec):
        simulate_spec["controls"] = {"dtmax": 0.1}
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(simulate_spec)
        assert excinfo.value.details["field"] == "controls.dtmax"

    def test_unknown_kernel_key(self, simulate_spec):
        simulate_spec["kernel"]["strength"] = 2.0
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(simulate_spec)
        assert excinfo.value.details["field"] == "kernel.strength"

    # ==========================================================================
    # Ranges
    # ==========================================================================

    def test_alpha_at_upper_limit(self, simulate_spec):
        simulate_spec["kernel"]["alpha"] = 1.0
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(simulate_spec)
        assert excinfo.value.details["field"] == "kernel.alpha"
        assert "0 < alpha < d-1" in excinfo.value.message

    @pytest.mark.parametrize("eps", [0.25, 0.4, -0.01])
    def test_eps_outside_selection_range(self, simulate_spec, eps):
        simulate_spec["eps"] = eps
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(simulate_spec)
        assert excinfo.value.details["field"] == "eps"

    def test_eps_just_below_limit(self, simulate_spec):
        simulate_spec["eps"] = 0.249
        assert spec_from_dict(simulate_spec).eps == 0.249

    def test_attractive_kernel_rejected(self, simulate_spec):
        simulate_spec["kernel"]["orientation"] = "attractive"
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(simulate_spec)
        assert excinfo.value.details["field"] == "kernel.orientation"

    def test_p_below_one(self, verify_spec):
        verify_spec["p"] = 0.5
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(verify_spec)
        assert excinfo.value.details["field"] == "p"

    def test_negative_time(self, simulate_spec):
        simulate_spec["T"] = -1.0
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(simulate_spec)
        assert excinfo.value.details["field"] == "T"

    def test_eta_outside_open_interval(self, simulate_spec):
        simulate_spec["controls"] = {"eta": 1.0}
        with pytest.raises(ValidationError):
            spec_from_dict(simulate_spec)

    # ==========================================================================
    # Mode requirements
    # ==========================================================================

    def test_missing_required_field(self, verify_spec):
        del verify_spec["p"]
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(verify_spec)
        assert excinfo.value.details["field"] == "p"

    def test_simulate_needs_initial_data(self, simulate_spec):
        del simulate_spec["positions"]
        simulate_spec["n"] = 4
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(simulate_spec)
        assert excinfo.value.details["field"] == "density"

    def test_n_and_n_list(self, verify_spec):
        verify_spec["n_list"] = [64]
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(verify_spec)
        assert excinfo.value.details["field"] == "n"

    def test_verify_runs_single_n(self, verify_spec):
        del verify_spec["n"]
        verify_spec["n_list"] = [64, 128]
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(verify_spec)
        assert excinfo.value.details["field"] == "n_list"

    def test_dimension_mismatch(self, verify_spec):
        verify_spec["density"]["dimension"] = 3
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(verify_spec)
        assert excinfo.value.details["field"] == "density"

    def test_unknown_estimator(self, mc_spec):
        mc_spec["which"] = "nearest-pair"
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(mc_spec)
        assert excinfo.value.details["field"] == "which"

    def test_missing_estimator_param(self, mc_spec):
        mc_spec["params"] = {}
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(mc_spec)
        assert excinfo.value.details["field"] == "params"

    def test_study_needs_p(self, mc_spec):
        mc_spec["which"] = "wasserstein-scaling"
        mc_spec["params"] = {}
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(mc_spec)
        assert excinfo.value.details["field"] == "p"

    def test_unknown_mode_param(self, verify_spec):
        verify_spec["params"] = {"gamma": 1.0}
        with pytest.raises(ValidationError) as excinfo:
            spec_from_dict(verify_spec)
        assert excinfo.value.details["field"] == "params"

    def test_not_an_object(self):
        with pytest.raises(ValidationError):
            spec_from_dict([1, 2, 3])
