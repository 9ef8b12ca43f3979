"""
Monte Carlo Studies
===================

    wasserstein_scaling_study   median W_p(rho_N, reference) against N
    assumptions_probability     fraction of i.i.d. draws meeting every hypothesis
    cutoff_bound_study          cut-off sum against its W_p bound, per replica
"""

import logging
from typing import Iterable, Optional

import numpy as np

from core.exceptions import ValidationError
from core.services import map_ordered
from meanfield.config import config
from particles import distance_report
from transport import PointCloud, empirical_distance
from verifier import (
    AssumptionReport,
    AssumptionThresholds,
    check_assumptions,
    check_cutoff_sum_bound,
    regime_warnings,
    select_delta,
)

from ..models import DensitySpec, MCPoint, MCReport, ProbabilityEstimate
from .estimators import check_replicas, fit_power_law, normalize_n_list
from .sampling import derive, int_seed, replica_seeds, sample_config, sample_points

logger = logging.getLogger(__name__)


def _reference(density: DensitySpec, n: int, factor: int, child: np.random.SeedSequence) -> PointCloud:
    return PointCloud(sample_points(density, factor * n, derive(child, 1)))


def wasserstein_scaling_study(
    density: DensitySpec,
    p: float,
    n_list: Iterable[int],
    replicas: int,
    reference_factor: Optional[int] = None,
    seed: int = 0,
    estimator: str = "auto",
    workers: int = 1,
) -> MCReport:
    """
    Per-N median of W_p between an N-sample and an independent
    (factor * N)-sample, and the least-squares slope of log median
    against log N. A pure power law is fitted; the residuals are reported
    so a logarithmic correction shows up there.
    """
    ns = normalize_n_list(n_list)
    if len(ns) < 3 or ns[-1] < 10 * ns[0]:
        raise ValidationError("n_list needs at least 3 values spanning a decade", field="n_list")
    replicas = check_replicas(replicas)
    factor = int(reference_factor or config.verifier.reference_factor)
    if factor < 1:
        raise ValidationError(f"reference_factor must be >= 1 (got {factor})", field="reference_factor")
    d = density.dimension

    report = MCReport(
        estimator="wasserstein-scaling",
        parameters={"d": d, "density": density.to_dict(), "p": p, "reference_factor": factor},
        seed=int(seed),
        replicas=replicas,
    )
    estimators_used = set()
    for n in ns:
        def one(child: np.random.SeedSequence):
            sample = sample_config(density, n, derive(child, 0))
            return empirical_distance(
                sample, _reference(density, n, factor, child), p,
                seed=int_seed(derive(child, 2)), estimator=estimator,
            )

        results = map_ordered(one, replica_seeds(seed, n, replicas), workers=workers)
        values = np.array([w.value for w in results])
        estimators_used.update(w.estimator for w in results)
        median = float(np.median(values))
        report.points.append(MCPoint(
            n=n,
            mean_statistic=float(np.mean(values)),
            median_statistic=median,
            scaled_median=median * n ** (1.0 / d),
        ))
        report.raw_rows.extend((n, r, float(v), True) for r, v in enumerate(values))
        logger.info("W_%s scaling N=%d: median %.4g", p, n, median)

    report.parameters["w_estimator"] = sorted(estimators_used)
    slope = fit_power_law(ns, [point.median_statistic for point in report.points])
    if slope is not None:
        report.fits["slope"] = slope
    return report


def assumptions_probability(
    density: DensitySpec,
    alpha: float,
    p: float,
    n_list: Iterable[int],
    replicas: int,
    eps: Optional[float] = None,
    thresholds: Optional[AssumptionThresholds] = None,
    reference_factor: Optional[int] = None,
    seed: int = 0,
    estimator: str = "auto",
    workers: int = 1,
) -> MCReport:
    """
    Fraction of replicas whose initial configuration meets every
    hypothesis with delta_N = select_delta(N, d, eps), with a per-condition
    breakdown. (alpha, p) outside the i.i.d. regime only add warnings.
    """
    d = density.dimension
    eps = config.montecarlo.epsilon if eps is None else eps
    thresholds = thresholds or AssumptionThresholds.from_defaults()
    replicas = check_replicas(replicas)
    factor = int(reference_factor or config.verifier.reference_factor)

    report = MCReport(
        estimator="assumptions-probability",
        parameters={
            "d": d, "density": density.to_dict(), "alpha": alpha, "p": p, "eps": eps,
            "reference_factor": factor, "thresholds": thresholds.to_dict(),
        },
        seed=int(seed),
        replicas=replicas,
        warnings=regime_warnings(d, alpha, p),
    )
    for warning in report.warnings:
        logger.warning("Regime: %s", warning)
    confidence = config.montecarlo.confidence

    for n in normalize_n_list(n_list):
        delta_n = select_delta(n, d, eps)

        def one(child: np.random.SeedSequence) -> AssumptionReport:
            return check_assumptions(
                sample_config(density, n, derive(child, 0)),
                _reference(density, n, factor, child),
                alpha, delta_n, p, thresholds, eps=eps,
                seed=int_seed(derive(child, 2)), estimator=estimator,
            )

        results = map_ordered(one, replica_seeds(seed, n, replicas), workers=workers)
        passed = [r.all_passed for r in results]
        breakdown = {
            name: ProbabilityEstimate.from_counts(sum(r.conditions()[name] for r in results), replicas, confidence)
            for name in AssumptionReport.CONDITIONS
        }
        w_values = np.array([r.w_p0 for r in results])
        report.points.append(MCPoint(
            n=n,
            estimate=ProbabilityEstimate.from_counts(sum(passed), replicas, confidence),
            mean_statistic=float(np.mean(w_values)),
            median_statistic=float(np.median(w_values)),
            breakdown=breakdown,
        ))
        report.raw_rows.extend((n, r, float(w), ok) for r, (w, ok) in enumerate(zip(w_values, passed)))
        logger.info("Assumptions N=%d delta_N=%.4g: %d/%d satisfied", n, delta_n, sum(passed), replicas)

    return report


def cutoff_bound_study(
    density: DensitySpec,
    beta: float,
    p: float,
    n_list: Iterable[int],
    replicas: int,
    delta_fraction: float = 0.5,
    ratio_limit: float = 10.0,
    reference_factor: Optional[int] = None,
    seed: int = 0,
    estimator: str = "auto",
    workers: int = 1,
) -> MCReport:
    """
    Ratio of (1/N) S_(beta, delta) to its W_p bound with
    delta = delta_fraction * d_min,1 in every replica. The event is
    ratio <= ratio_limit.
    """
    ns = normalize_n_list(n_list)
    if ns[0] < 3:
        raise ValidationError("The cut-off bound study needs N >= 3", field="n_list")
    if not delta_fraction > 0:
        raise ValidationError(f"delta_fraction must be > 0 (got {delta_fraction})", field="delta_fraction")
    replicas = check_replicas(replicas)
    factor = int(reference_factor or config.verifier.reference_factor)
    rho_inf = density.sup_density

    report = MCReport(
        estimator="cutoff-bound",
        parameters={
            "d": density.dimension, "density": density.to_dict(), "beta": beta, "p": p,
            "delta_fraction": delta_fraction, "ratio_limit": ratio_limit, "reference_factor": factor,
        },
        seed=int(seed),
        replicas=replicas,
    )
    for n in ns:
        def one(child: np.random.SeedSequence) -> float:
            sample = sample_config(density, n, derive(child, 0))
            delta = delta_fraction * distance_report(sample, 0.0).d_min1
            bound = check_cutoff_sum_bound(
                sample, _reference(density, n, factor, child), beta, delta, p, rho_inf,
                seed=int_seed(derive(child, 2)), estimator=estimator,
            )
            return bound.ratio

        ratios = np.array(map_ordered(one, replica_seeds(seed, n, replicas), workers=workers))
        within = ratios <= ratio_limit
        report.points.append(MCPoint(
            n=n,
            estimate=ProbabilityEstimate.from_counts(int(within.sum()), replicas, config.montecarlo.confidence),
            mean_statistic=float(np.mean(ratios)),
            median_statistic=float(np.median(ratios)),
        ))
        report.raw_rows.extend((n, r, float(v), bool(ok)) for r, (v, ok) in enumerate(zip(ratios, within)))
        logger.info("Cut-off bound N=%d: max ratio %.4g", n, float(ratios.max()))
    report.fits["max_ratio"] = {"value": float(max(row[2] for row in report.raw_rows))}
    return report
