"""
Replica Estimators
==================

Event probabilities over i.i.d. initial configurations. For every N in
the list, R replicas are sampled with seeds keyed by (seed, N, replica);
replicas run on the ordered worker pool and are reduced in replica order.
"""

import dataclasses
import logging
import math
from typing import Iterable, Union

import numpy as np
from scipy import stats

from core.exceptions import ValidationError
from core.services import map_ordered
from meanfield.config import config

from ..models import DensitySpec, MCPoint, MCReport, ProbabilityEstimate
from .bounds import fit_constant
from .registry import ESTIMATOR_REGISTRY, EstimatorConfig, get_estimator_config
from .sampling import replica_seeds, sample_config

logger = logging.getLogger(__name__)

NList = Union[int, Iterable[int]]


def normalize_n_list(n: NList) -> list[int]:
    values = [int(n)] if isinstance(n, (int, np.integer)) else [int(v) for v in n]
    if not values:
        raise ValidationError("n_list must not be empty", field="n_list")
    if any(v < 2 for v in values):
        raise ValidationError(f"All N must be >= 2 (got {values})", field="n_list")
    return sorted(set(values))


def check_replicas(replicas: int) -> int:
    minimum = config.montecarlo.min_replicas
    if replicas < minimum:
        raise ValidationError(f"replicas must be >= {minimum} (got {replicas})", field="replicas")
    return int(replicas)


def fit_power_law(ns: Iterable[float], values: Iterable[float]) -> dict | None:
    """
    Least-squares slope of log value against log N with its standard error.
    Non-positive values are dropped; None when fewer than two remain.
    """
    pairs = [(n, v) for n, v in zip(ns, values) if v > 0 and math.isfinite(v)]
    if len(pairs) < 2:
        return None
    x = np.log([n for n, _ in pairs])
    y = np.log([v for _, v in pairs])
    fit = stats.linregress(x, y)
    residuals = y - (fit.intercept + fit.slope * x)
    return {
        "value": float(fit.slope),
        "stderr": float(fit.stderr),
        "intercept": float(fit.intercept),
        "residuals": [float(r) for r in residuals],
        "points": len(pairs),
    }


def run_estimator(
    estimator: Union[str, EstimatorConfig],
    density: DensitySpec,
    n_list: NList,
    replicas: int,
    seed: int = 0,
    workers: int = 1,
    **params,
) -> MCReport:
    """
    Run a registered estimator over ``n_list``.

    The bound constant is fitted at the smallest N and the bound evaluated
    at every N.
    """
    entry = get_estimator_config(estimator) if isinstance(estimator, str) else estimator
    if entry is None:
        raise ValidationError(f"Unknown estimator '{estimator}'", field="estimator")
    missing = [name for name in entry.params if name not in params]
    if missing:
        raise ValidationError(f"{entry.id} needs parameters {missing}", field=missing[0])
    replicas = check_replicas(replicas)
    d = density.dimension
    confidence = config.montecarlo.confidence

    report = MCReport(
        estimator=entry.id,
        parameters={"d": d, "density": density.to_dict(), **params},
        seed=int(seed),
        replicas=replicas,
    )

    for n in normalize_n_list(n_list):
        def one(child: np.random.SeedSequence) -> tuple[float, bool]:
            return entry.statistic(sample_config(density, n, child), **params)

        results = map_ordered(one, replica_seeds(seed, n, replicas), workers=workers)
        values = np.array([value for value, _ in results], dtype=float)
        events = [bool(event) for _, event in results]
        estimate = ProbabilityEstimate.from_counts(sum(events), replicas, confidence)
        finite = values[np.isfinite(values)]
        median = float(np.median(finite)) if len(finite) else math.nan
        point = MCPoint(
            n=n,
            estimate=estimate,
            mean_statistic=float(np.mean(finite)) if len(finite) else math.nan,
            median_statistic=median,
            scaled_median=median * n ** (entry.scale_power / d) if entry.scale_power else math.nan,
        )
        report.points.append(point)
        report.raw_rows.extend((n, r, float(v), e) for r, (v, e) in enumerate(zip(values, events)))
        logger.info(
            "%s N=%d: %d/%d events (%.4g [%.4g, %.4g])",
            entry.id, n, estimate.successes, replicas, estimate.estimate, estimate.lower, estimate.upper,
        )

    if entry.bound is not None:
        first = report.points[0]
        constant = fit_constant(entry.bound, first.estimate.estimate, first.n, d, **params)
        report.bound_constant = constant
        if math.isfinite(constant):
            for point in report.points:
                point.bound = entry.bound(constant, point.n, d, **params)

    exponent = fit_power_law(report.n_list, [p.estimate.estimate for p in report.points])
    if exponent is not None:
        report.fits["n_exponent"] = exponent
    return report


# ─── Named estimators ───────────────────────────────────────────────

def estimate_dmin_tail(density: DensitySpec, n: NList, L: float, replicas: int,
                       seed: int = 0, workers: int = 1) -> MCReport:
    """P(d_min <= L^-1 N^(-2/d))."""
    if not L > 0:
        raise ValidationError(f"L must be > 0 (got {L})", field="L")
    return run_estimator("dmin-tail", density, n, replicas, seed, workers, L=L)


def estimate_dmin1_tail(density: DensitySpec, n: NList, L: float, replicas: int,
                        seed: int = 0, workers: int = 1) -> MCReport:
    """P(d_min,1 <= L^-1 N^(-3/(2d)))."""
    if not L > 0:
        raise ValidationError(f"L must be > 0 (got {L})", field="L")
    return run_estimator("dmin1-tail", density, n, replicas, seed, workers, L=L)


def estimate_triple_pair(density: DensitySpec, n: NList, l1: float, l2: float, replicas: int,
                         seed: int = 0, workers: int = 1) -> MCReport:
    """P(exists i != j != k: d_ij <= L1, d_ik <= L2)."""
    if not (l1 > 0 and l2 > 0):
        raise ValidationError("L1 and L2 must be > 0", field="l1")
    return run_estimator("triple-pair", density, n, replicas, seed, workers, l1=l1, l2=l2)


def estimate_triple_event(density: DensitySpec, n: NList, beta: float, eps: float, delta: float,
                          replicas: int, seed: int = 0, workers: int = 1) -> MCReport:
    """P(exists i != j != k: d_ik < delta and N^-1 d_ij^-1 d_ik^-beta >= N^-eps)."""
    if not beta > 0:
        raise ValidationError(f"beta must be > 0 (got {beta})", field="beta")
    if not 0 < eps < 1:
        raise ValidationError(f"eps must lie in (0, 1) (got {eps})", field="eps")
    if not delta >= 0:
        raise ValidationError(f"delta must be >= 0 (got {delta})", field="delta")
    entry = ESTIMATOR_REGISTRY["triple-event"]
    if delta == 0:
        # empty event; the bound is not defined at delta = 0
        entry = dataclasses.replace(entry, bound=None)
    return run_estimator(entry, density, n, replicas, seed, workers, beta=beta, eps=eps, delta=delta)


def estimate_close_pairs_tail(density: DensitySpec, n: NList, delta: float, theta: float, replicas: int,
                              seed: int = 0, workers: int = 1) -> MCReport:
    """
    P(#{i : d_(i, i_nn) <= delta N^(-1/d)} >= 2 theta N). The mean count
    fraction is reported as ``mean_statistic``.
    """
    if not 0 < theta < 1:
        raise ValidationError(f"theta must lie in (0, 1) (got {theta})", field="theta")
    if not delta >= 0:
        raise ValidationError(f"delta must be >= 0 (got {delta})", field="delta")
    report = run_estimator("close-pairs", density, n, replicas, seed, workers, delta=delta, theta=theta)
    if density.sup_density * delta ** density.dimension >= theta:
        report.warnings.append(
            f"||rho0||_inf delta^d = {density.sup_density * delta ** density.dimension:.4g} is not below "
            f"theta = {theta}; the large-deviation bound needs C delta^d < theta"
        )
    return report
