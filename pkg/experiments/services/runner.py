"""
Experiment Runner
=================

Executes a validated ``ExperimentSpec``. Each mode has one handler that
writes its artifacts through ``RunRepository`` and returns the acceptance
checks for its outputs; the runner then writes the manifest and applies
``--strict``.

Random streams below a root seed sequence:

    0   initial configuration
    1   reference cloud
    2   transport subsampling

Single-N modes use SeedSequence(seed); the convergence study uses the
stream keyed by (seed, N) so each N is reproducible on its own.
"""

import dataclasses
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from core.exceptions import NumericalError
from core.services import BaseService
from dynamics import IntegratorControls, meanfield_reference, simulate
from meanfield import __version__
from meanfield.config import config
from montecarlo import (
    MCReport,
    assumptions_probability,
    cutoff_bound_study,
    estimate_close_pairs_tail,
    estimate_dmin1_tail,
    estimate_dmin_tail,
    estimate_triple_event,
    estimate_triple_pair,
    wasserstein_scaling_study,
)
from montecarlo.services import density_sampler, derive, int_seed, replica_seeds, sample_config
from particles import ParticleConfig
from transport import choose_estimator, plan_rows, wasserstein
from verifier import (
    BootstrapSeries,
    bootstrap_monitor,
    check_assumptions,
    check_conclusions,
    regime_warnings,
    select_delta,
)

from ..models import AcceptanceCheck, ExperimentSpec, Mode, RunManifest
from ..repositories import RunRepository
from . import acceptance

MC_ESTIMATORS = {
    "dmin-tail": estimate_dmin_tail,
    "dmin1-tail": estimate_dmin1_tail,
    "triple-pair": estimate_triple_pair,
    "triple-event": estimate_triple_event,
    "close-pairs": estimate_close_pairs_tail,
}

CONVERGENCE_HEADER = (
    "n", "delta_n", "w0", "sup_w", "w_floor",
    "fitted_c_dist", "fitted_c_wp", "prefactor_envelope", "sup_margin",
)


@dataclass
class VerifyOutcome:
    """Everything one (micro, reference) verification produced."""
    n: int
    delta_n: float
    eps: float
    l1: float
    micro: object
    reference: object
    assumptions: object
    conclusions: object
    bootstrap: BootstrapSeries

    def table_row(self) -> dict:
        w = self.conclusions.w_series
        return {
            "n": self.n,
            "delta_n": self.delta_n,
            "w0": w[0],
            "sup_w": max(w),
            "w_floor": self.conclusions.w_floor,
            "fitted_c_dist": self.conclusions.fitted_c_dist,
            "fitted_c_wp": self.conclusions.fitted_c_wp,
            "prefactor_envelope": self.conclusions.prefactor_envelope,
            "sup_margin": self.conclusions.sup_margin,
        }

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "delta_n": self.delta_n,
            "eps": self.eps,
            "l1": self.l1,
            "trajectory": self.micro.summary(),
            "reference": {**self.reference.summary(), "epsilon": self.reference.metadata.get("epsilon")},
            "assumptions": self.assumptions.to_dict(),
            "conclusions": self.conclusions.to_dict(),
            "bootstrap": self.bootstrap.to_dict(),
        }


@dataclass
class RunResult:
    output_dir: Path
    manifest: RunManifest
    checks: list = field(default_factory=list)

    @property
    def failed(self) -> list[AcceptanceCheck]:
        return [check for check in self.checks if not check.passed]


class ExperimentRunner(BaseService):
    """
    Run one experiment spec into one output directory.

    Usage::

        result = ExperimentRunner(spec, output_dir="runs/demo", workers=4).run()
        result.manifest.files
    """

    def __init__(
        self,
        spec: ExperimentSpec,
        output_dir: Optional[Path | str] = None,
        workers: Optional[int] = None,
        strict: Optional[bool] = None,
    ):
        self.spec = spec
        self.workers = max(1, int(workers or config.runner.threads))
        self.strict = config.runner.strict if strict is None else bool(strict)
        root = output_dir or spec.output or Path(config.runner.output_dir) / f"{spec.mode.value}-{spec.spec_hash()[:12]}"
        self.repository = RunRepository(root)
        self.run_id = self.generate_run_id()

    # ── Entry point ───────────────────────────────────────────────────

    def run(self) -> RunResult:
        spec = self.spec
        started_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
        clock = time.perf_counter()
        self.logger.info(
            "[%s] %s run: seed=%d, %d workers, output %s",
            self.run_id, spec.mode.value, spec.seed, self.workers, self.repository.root,
        )
        handler = {
            Mode.SIMULATE: self._run_simulate,
            Mode.VERIFY: self._run_verify,
            Mode.MC_LEMMA: self._run_mc_lemma,
            Mode.ASSUMPTIONS_PROB: self._run_assumptions_prob,
            Mode.CONVERGENCE_STUDY: self._run_convergence_study,
        }[spec.mode]

        try:
            checks = handler()
        except NumericalError as exc:
            partial = getattr(exc, "trajectory", None)
            if partial is not None:
                self.repository.save_trajectory("trajectory_partial.csv", partial)
            self._write_manifest(started_at, clock, [], status="aborted", exit_code=exc.exit_code)
            self.logger.error("[%s] numerical abort: %s", self.run_id, exc.message)
            raise

        self.repository.write_json("acceptance.json", [check.to_dict() for check in checks])
        hard_failed = any(check.hard and not check.passed for check in checks)
        exit_code = 4 if self.strict and hard_failed else 0
        manifest = self._write_manifest(
            started_at, clock, checks,
            status="failed" if exit_code else "complete", exit_code=exit_code,
        )
        acceptance.enforce(checks, self.strict)
        self.logger.info(
            "[%s] finished in %.2fs, %d files, %d/%d checks passed",
            self.run_id, manifest.wall_clock_seconds, len(manifest.files),
            sum(check.passed for check in checks), len(checks),
        )
        return RunResult(self.repository.root, manifest, checks)

    def _write_manifest(self, started_at: str, clock: float, checks: list, status: str, exit_code: int) -> RunManifest:
        manifest = RunManifest(
            spec_hash=self.spec.spec_hash(),
            version=__version__,
            mode=self.spec.mode.value,
            seed=self.spec.seed,
            threads=self.workers,
            started_at=started_at,
            wall_clock_seconds=round(time.perf_counter() - clock, 3),
            files={},
            status=status,
            exit_code=exit_code,
            acceptance=checks,
            spec=self.spec.raw,
        )
        self.repository.save_manifest(manifest)
        return manifest

    # ── Shared pieces ─────────────────────────────────────────────────

    def _controls(self, **overrides) -> IntegratorControls:
        controls = self.spec.controls or IntegratorControls.from_defaults()
        return dataclasses.replace(controls, **overrides) if overrides else controls

    def _initial_config(self, root: np.random.SeedSequence, n: int) -> ParticleConfig:
        if self.spec.positions is not None:
            return ParticleConfig(np.array(self.spec.positions, dtype=float))
        return sample_config(self.spec.density, n, derive(root, 0))

    def _verify_one(self, root: np.random.SeedSequence, n: int) -> VerifyOutcome:
        """Particle run, blob reference, and the three verifier reports at one N."""
        spec = self.spec
        eps = spec.eps if spec.eps is not None else config.montecarlo.epsilon
        delta_n = spec.delta_n or select_delta(n, spec.dimension, eps)
        factor = spec.reference_factor or config.verifier.reference_factor
        controls = self._controls()
        if controls.diagnostic_delta is None:
            controls = dataclasses.replace(controls, diagnostic_delta=delta_n)

        initial = self._initial_config(root, n)
        micro = simulate(initial, spec.kernel, spec.T, controls, workers=self.workers, seed=spec.seed)
        reference = meanfield_reference(
            density_sampler(spec.density, derive(root, 1)),
            spec.kernel,
            factor * n,
            spec.T,
            controls=dataclasses.replace(controls, diagnostic_delta=None, record_diagnostics=False),
            eps=spec.params.get("blob_epsilon"),
            support_diameter=spec.density.support_diameter,
            companion_n=n,
            workers=self.workers,
        )

        w_seed = int_seed(derive(root, 2))
        assumptions = check_assumptions(
            initial, reference.initial, spec.kernel, delta_n, spec.p, spec.thresholds,
            eps=eps, seed=w_seed, workers=self.workers,
        )
        conclusions = check_conclusions(micro, reference, spec.p, delta_n, seed=w_seed, workers=self.workers)
        # default L1 is half the fitted distance-decay rate
        l1 = spec.params.get("l1", conclusions.fitted_c_dist / 2.0)
        bootstrap = bootstrap_monitor(micro, delta_n, l1, spec.kernel.alpha, workers=self.workers)
        self.logger.info(
            "N=%d: W_p(0)=%.4g, C=%.4g, sup margin %.4g, assumptions %s",
            n, conclusions.w_series[0], conclusions.fitted_c_wp, conclusions.sup_margin,
            "met" if assumptions.all_passed else "not met",
        )
        return VerifyOutcome(n, delta_n, eps, l1, micro, reference, assumptions, conclusions, bootstrap)

    def _save_plans(self, outcome: VerifyOutcome) -> None:
        p = self.spec.p
        m = outcome.reference.n
        if choose_estimator(outcome.n, m, p) != "dense":
            self.logger.warning("Plans not saved: N=%d, M=%d is beyond the dense transport budget", outcome.n, m)
            return
        for k in (0, len(outcome.micro.configs) - 1):
            a, b = outcome.micro.configs[k], outcome.reference.configs[k]
            result = wasserstein(a, b, p)
            self.repository.save_plan(f"plan_n{outcome.n}_s{k}", plan_rows(result, a, b))

    def _context(self) -> dict:
        spec = self.spec
        context = {"mode": spec.mode.value, "seed": spec.seed, "dimension": spec.dimension}
        if spec.kernel is not None:
            context["kernel"] = spec.kernel.to_dict()
        if spec.density is not None:
            context["density"] = spec.density.to_dict()
        return context

    def _warnings(self) -> list[str]:
        spec = self.spec
        if spec.kernel is None or spec.p is None:
            return []
        return regime_warnings(spec.dimension, spec.kernel.alpha, spec.p)

    # ── Modes ─────────────────────────────────────────────────────────

    def _run_simulate(self) -> list[AcceptanceCheck]:
        spec = self.spec
        initial = self._initial_config(np.random.SeedSequence(spec.seed), spec.n)
        trajectory = simulate(initial, spec.kernel, spec.T, self._controls(), workers=self.workers, seed=spec.seed)
        self.repository.save_trajectory("trajectory.csv", trajectory)
        self.repository.save_report({
            **self._context(),
            "T": spec.T,
            "controls": trajectory.controls.to_dict(),
            "trajectory": trajectory.summary(),
        })
        return acceptance.simulate_checks(trajectory)

    def _run_verify(self) -> list[AcceptanceCheck]:
        outcome = self._verify_one(np.random.SeedSequence(self.spec.seed), self.spec.n)
        repo = self.repository
        repo.save_trajectory("trajectory.csv", outcome.micro)
        repo.save_trajectory("reference.csv", outcome.reference)
        repo.write_csv("conclusions.csv", ("t", "w_p", "margin"), outcome.conclusions.rows())
        repo.write_csv("bootstrap.csv", BootstrapSeries.CSV_HEADER, outcome.bootstrap.rows())
        if self.spec.save_plans:
            self._save_plans(outcome)
        repo.save_report({
            **self._context(),
            **outcome.to_dict(),
            "T": self.spec.T,
            "p": self.spec.p,
            "warnings": self._warnings(),
        })
        return acceptance.verify_checks(outcome.conclusions, outcome.bootstrap, outcome.assumptions.all_passed)

    def _run_convergence_study(self) -> list[AcceptanceCheck]:
        spec = self.spec
        outcomes = []
        for n in sorted(set(spec.n_list)):
            outcome = self._verify_one(replica_seeds(spec.seed, n, 1)[0], n)
            self.repository.write_csv(f"conclusions_n{n}.csv", ("t", "w_p", "margin"), outcome.conclusions.rows())
            if spec.save_plans:
                self._save_plans(outcome)
            outcomes.append(outcome)

        rows = [outcome.table_row() for outcome in outcomes]
        self.repository.write_csv(
            "convergence.csv", CONVERGENCE_HEADER, [[row[key] for key in CONVERGENCE_HEADER] for row in rows],
        )
        self.repository.save_report({
            **self._context(),
            "T": spec.T,
            "p": spec.p,
            "table": rows,
            "runs": [outcome.to_dict() for outcome in outcomes],
            "warnings": self._warnings(),
        })
        return acceptance.convergence_checks(rows)

    def _run_mc_lemma(self) -> list[AcceptanceCheck]:
        spec = self.spec
        params = dict(spec.params)
        common = {"replicas": spec.replicas, "seed": spec.seed, "workers": self.workers}
        if spec.which in MC_ESTIMATORS:
            report = MC_ESTIMATORS[spec.which](spec.density, spec.n_list, **params, **common)
        elif spec.which == "wasserstein-scaling":
            report = wasserstein_scaling_study(
                spec.density, spec.p, spec.n_list, reference_factor=spec.reference_factor, **common,
            )
        else:
            beta = params.pop("beta")
            report = cutoff_bound_study(
                spec.density, beta, spec.p, spec.n_list, reference_factor=spec.reference_factor,
                **params, **common,
            )
        return self._save_mc(report)

    def _run_assumptions_prob(self) -> list[AcceptanceCheck]:
        spec = self.spec
        report = assumptions_probability(
            spec.density, spec.kernel.alpha, spec.p, spec.n_list, spec.replicas,
            eps=spec.eps, thresholds=spec.thresholds, reference_factor=spec.reference_factor,
            seed=spec.seed, workers=self.workers,
        )
        rows = [
            (point.n, name, est.successes, est.replicas, est.estimate, est.lower, est.upper)
            for point in report.points
            for name, est in point.breakdown.items()
        ]
        self.repository.write_csv(
            "breakdown.csv", ("n", "condition", "successes", "replicas", "estimate", "lower", "upper"), rows,
        )
        return self._save_mc(report)

    def _save_mc(self, report: MCReport) -> list[AcceptanceCheck]:
        self.repository.save_mc_report(report, self.spec.mode.value)
        return acceptance.mc_checks(report)
