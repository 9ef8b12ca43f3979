"""
Tests for the experiment runner, acceptance checks and run repository.

Run with: python -m pytest experiments/tests/test_runner.py -v
"""

import csv
import json
import math

import pytest

from core.exceptions import AcceptanceError, ValidationError
from experiments.models import AcceptanceCheck
from experiments.repositories import RunRepository
from experiments.serializers import spec_from_dict
from experiments.services import ExperimentRunner, enforce, format_table, render_report
from experiments.services.acceptance import convergence_checks, tail_ratio_checks


def read_csv(path):
    with path.open(encoding="utf-8") as handle:
        return list(csv.reader(handle))


@pytest.fixture
def mc_spec():
    return spec_from_dict({
        "mode": "mc-lemma",
        "which": "dmin-tail",
        "density": {"family": "uniform-cube", "dimension": 2},
        "n_list": [20, 40],
        "replicas": 30,
        "params": {"L": 2.0},
        "seed": 3,
    })


@pytest.fixture
def verify_spec():
    return spec_from_dict({
        "mode": "verify",
        "kernel": {"family": "power-law", "alpha": 0.3, "dimension": 2},
        "density": {"family": "uniform-cube", "dimension": 2},
        "n": 16,
        "T": 0.2,
        "p": 2,
        "reference_factor": 2,
        "controls": {"record_every": 0.1},
        "save_plans": True,
        "seed": 5,
    })


class TestMonteCarloRuns:

    def test_outputs_and_manifest(self, mc_spec, tmp_path):
        result = ExperimentRunner(mc_spec, output_dir=tmp_path, workers=1).run()
        assert set(result.manifest.files) == {"report.json", "summary.csv", "replicas.csv", "acceptance.json"}
        rows = read_csv(tmp_path / "replicas.csv")
        assert rows[0] == ["n", "replica", "statistic", "event"]
        assert len(rows) == 1 + 2 * 30
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["mode"] == "mc-lemma"
        assert report["estimator"] == "dmin-tail"
        assert [point["n"] for point in report["points"]] == [20, 40]

    def test_checksums_match_files(self, mc_spec, tmp_path):
        ExperimentRunner(mc_spec, output_dir=tmp_path, workers=1).run()
        repository = RunRepository(tmp_path)
        assert repository.verify_checksums(repository.load_manifest()) == []

    def test_worker_count_does_not_change_outputs(self, mc_spec, tmp_path):
        ExperimentRunner(mc_spec, output_dir=tmp_path / "one", workers=1).run()
        ExperimentRunner(mc_spec, output_dir=tmp_path / "three", workers=3).run()
        for name in ("report.json", "summary.csv", "replicas.csv", "acceptance.json"):
            assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "three" / name).read_bytes()

    def test_assumptions_breakdown(self, tmp_path):
        spec = spec_from_dict({
            "mode": "assumptions-prob",
            "kernel": {"family": "power-law", "alpha": 0.3, "dimension": 2},
            "density": {"family": "uniform-cube", "dimension": 2},
            "n_list": [10, 20],
            "replicas": 30,
            "p": 2,
            "reference_factor": 2,
        })
        result = ExperimentRunner(spec, output_dir=tmp_path, workers=2).run()
        rows = read_csv(tmp_path / "breakdown.csv")
        assert len(rows) == 1 + 2 * 6
        assert {row[1] for row in rows[1:]} == {"delta", "conv", "wp", "strong1", "strong2", "absorbable"}
        assert [check.name for check in result.checks] == ["satisfaction_nondecreasing"]


class TestVerifyRuns:

    def test_reports_and_series(self, verify_spec, tmp_path):
        result = ExperimentRunner(verify_spec, output_dir=tmp_path, workers=1).run()
        report = json.loads((tmp_path / "report.json").read_text())
        assert {"assumptions", "conclusions", "bootstrap"} <= set(report)
        assert report["reference"]["n"] == 32
        assert len(read_csv(tmp_path / "conclusions.csv")) == 1 + 3
        assert len(read_csv(tmp_path / "bootstrap.csv")) == 1 + 3
        assert "plans/plan_n16_s0.csv" in result.manifest.files
        names = [check.name for check in result.checks]
        assert names[:2] == ["fitted_c_dist_finite", "sup_margin"]

    def test_default_l1_is_half_the_fitted_rate(self, verify_spec, tmp_path):
        ExperimentRunner(verify_spec, output_dir=tmp_path, workers=1).run()
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["l1"] == pytest.approx(report["conclusions"]["fitted_c_dist"] / 2.0)

    def test_convergence_table(self, tmp_path):
        spec = spec_from_dict({
            "mode": "convergence-study",
            "kernel": {"family": "power-law", "alpha": 0.3, "dimension": 2},
            "density": {"family": "uniform-cube", "dimension": 2},
            "n_list": [16, 8],
            "T": 0.1,
            "p": 2,
            "reference_factor": 2,
            "controls": {"record_every": 0.05},
        })
        ExperimentRunner(spec, output_dir=tmp_path, workers=1).run()
        rows = read_csv(tmp_path / "convergence.csv")
        assert rows[0][:2] == ["n", "delta_n"]
        assert [row[0] for row in rows[1:]] == ["8", "16"]
        report = json.loads((tmp_path / "report.json").read_text())
        assert len(report["runs"]) == 2


class TestAcceptance:

    def test_enforce_strict(self):
        checks = [AcceptanceCheck("a", True), AcceptanceCheck("b", False)]
        with pytest.raises(AcceptanceError) as excinfo:
            enforce(checks, strict=True)
        assert excinfo.value.exit_code == 4
        assert excinfo.value.details["checks"] == ["b"]

    def test_soft_failures_never_raise(self):
        enforce([AcceptanceCheck("soft", False, hard=False)], strict=True)
        enforce([AcceptanceCheck("hard", False)], strict=False)

    def test_convergence_checks(self):
        rows = [
            {"n": 512, "fitted_c_dist": 0.4, "sup_margin": 1.2, "sup_w": 0.05, "w_floor": 0.001},
            {"n": 2048, "fitted_c_dist": 0.6, "sup_margin": 1.1, "sup_w": 0.03, "w_floor": 0.0005},
        ]
        checks = {check.name: check for check in convergence_checks(rows)}
        assert all(check.passed for check in checks.values())
        assert checks["fitted_c_dist_stable"].value == pytest.approx(1.5)

    def test_unstable_rate_fails(self):
        rows = [
            {"n": 512, "fitted_c_dist": 0.1, "sup_margin": 1.0, "sup_w": 0.05, "w_floor": 0.0},
            {"n": 2048, "fitted_c_dist": 0.5, "sup_margin": 1.0, "sup_w": 0.06, "w_floor": 0.0},
        ]
        checks = {check.name: check for check in convergence_checks(rows)}
        assert not checks["fitted_c_dist_stable"].passed
        assert not checks["sup_distance_nonincreasing"].passed

    def test_zero_rates_are_stable(self):
        rows = [
            {"n": 8, "fitted_c_dist": 0.0, "sup_margin": 1.0, "sup_w": 0.1, "w_floor": 0.0},
            {"n": 16, "fitted_c_dist": 0.0, "sup_margin": 1.0, "sup_w": 0.1, "w_floor": 0.0},
        ]
        checks = {check.name: check for check in convergence_checks(rows)}
        assert checks["fitted_c_dist_stable"].value == 1.0

    # ==========================================================================
    # dmin-tail ratio between two runs
    # ==========================================================================

    @staticmethod
    def tail_report(L, successes, n_list=(250, 1000), replicas=200):
        return {
            "mode": "mc-lemma",
            "estimator": "dmin-tail",
            "parameters": {"d": 2, "L": L},
            "points": [
                {"n": n, "estimate": {"successes": k, "replicas": replicas, "estimate": k / replicas}}
                for n, k in zip(n_list, successes)
            ],
        }

    def test_tail_ratio_within_band(self):
        checks = tail_ratio_checks(self.tail_report(4.0, [20, 18]), self.tail_report(2.0, [64, 70]))
        assert [check.name for check in checks] == ["dmin_tail_ratio_n250", "dmin_tail_ratio_n1000"]
        assert all(check.passed for check in checks)
        assert checks[0].value == pytest.approx(20 / 64)
        assert checks[0].limit == 0.25

    def test_tail_ratio_order_of_arguments(self):
        forward = tail_ratio_checks(self.tail_report(4.0, [20, 18]), self.tail_report(2.0, [64, 70]))
        backward = tail_ratio_checks(self.tail_report(2.0, [64, 70]), self.tail_report(4.0, [20, 18]))
        assert [c.value for c in forward] == [c.value for c in backward]

    def test_tail_ratio_outside_band(self):
        # 2^-d / 2 = 0.125 and 2 * 2^-d = 0.5 bound the ratio
        checks = tail_ratio_checks(self.tail_report(4.0, [7, 40]), self.tail_report(2.0, [64, 70]))
        assert not checks[0].passed
        assert not checks[1].passed
        with pytest.raises(AcceptanceError):
            enforce(checks, strict=True)

    def test_tail_ratio_without_events_fails(self):
        checks = tail_ratio_checks(self.tail_report(4.0, [0, 0]), self.tail_report(2.0, [0, 5]))
        assert math.isnan(checks[0].value)
        assert not checks[0].passed
        assert checks[1].value == 0.0

    def test_tail_ratio_only_on_common_n(self):
        checks = tail_ratio_checks(
            self.tail_report(4.0, [20, 18], n_list=(250, 4000)), self.tail_report(2.0, [64, 70]),
        )
        assert [check.name for check in checks] == ["dmin_tail_ratio_n250"]

    @pytest.mark.parametrize("change", [
        {"estimator": "triple-pair"},
        {"parameters": {"d": 3, "L": 4.0}},
        {"parameters": {"d": 2, "L": 2.0}},
        {"points": [{"n": 64, "estimate": {"successes": 1, "replicas": 200, "estimate": 0.005}}]},
    ])
    def test_tail_ratio_rejects_unrelated_runs(self, change):
        report = {**self.tail_report(4.0, [20, 18]), **change}
        with pytest.raises(ValidationError) as excinfo:
            tail_ratio_checks(report, self.tail_report(2.0, [64, 70]))
        assert excinfo.value.details["field"] == "compare"


class TestTables:

    def test_format_table(self):
        lines = format_table(("n", "value"), [(8, 0.5), (1024, math.inf), (3, None)])
        assert lines[0] == "n     value"
        assert lines[2] == "8     0.5"
        assert lines[3] == "1024  inf"
        assert lines[4] == "3     -"

    def test_render_mc_report(self, mc_spec, tmp_path):
        ExperimentRunner(mc_spec, output_dir=tmp_path, workers=1).run()
        repository = RunRepository(tmp_path)
        lines = render_report(repository.load_report(), repository.load_manifest()["acceptance"])
        assert lines[0] == "Mode: mc-lemma"
        assert any(line.startswith("Estimator: dmin-tail") for line in lines)
        assert any("estimates_agree_across_n" in line for line in lines)
