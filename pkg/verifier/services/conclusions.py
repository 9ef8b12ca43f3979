"""
Conclusion Checks
=================

Fits the constants of the stability estimate on a recorded run:

    d_ij(t) >= e^(-C t) d_ij(0)                      for all pairs
    W_p(t)  <= K (W_p(0) + penalty) e^(C t)           at every sample

where W_p(t) is measured between the particle cloud and the reference
cloud at the same sample time.
"""

import logging
import math

import numpy as np
from scipy import stats

from core.exceptions import ValidationError
from particles import ParticleConfig, distance_block, distance_report, map_row_blocks
from transport import empirical_distance

from ..models import ConclusionReport
from .assumptions import absorbable_lhs

logger = logging.getLogger(__name__)

_TIME_TOL = 1e-9


def min_distance_ratio(initial: ParticleConfig, current: ParticleConfig, workers: int = 1) -> float:
    """min over pairs i != j of d_ij(current) / d_ij(initial)."""
    if initial.n != current.n or initial.dim != current.dim:
        raise ValidationError("Configurations have different shapes", field="configs")
    x0, xt = initial.positions, current.positions
    n = initial.n

    def block(rows: slice) -> np.ndarray:
        d0 = distance_block(x0, rows)
        dt = distance_block(xt, rows)
        local = np.arange(rows.stop - rows.start)
        d0[local, local + rows.start] = np.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(d0 > 0, dt / d0, np.inf)
        ratio[local, local + rows.start] = np.inf
        return ratio.min(axis=1)

    return float(np.min(map_row_blocks(block, n, n, workers=workers)))


def check_sampling_grids(micro, reference) -> None:
    a, b = micro.sample_times, reference.sample_times
    if len(a) != len(b) or any(abs(s - t) > _TIME_TOL * max(1.0, abs(s)) for s, t in zip(a, b)):
        raise ValidationError(
            f"Sampling grids differ: {len(a)} vs {len(b)} samples", field="sample_times",
        )


def fit_distance_rate(micro, workers: int = 1) -> float:
    """Smallest C >= 0 with d_ij(t) >= e^(-C t) d_ij(0) at every recorded t > 0."""
    worst = 0.0
    for t, current in zip(micro.sample_times, micro.configs):
        if t <= 0:
            continue
        ratio = min_distance_ratio(micro.initial, current, workers=workers)
        if ratio <= 0:
            return math.inf
        worst = max(worst, -math.log(ratio) / t)
    return worst


def check_conclusions(
    micro,
    reference,
    p: float,
    delta_n: float,
    seed: int = 0,
    estimator: str = "auto",
    workers: int = 1,
) -> ConclusionReport:
    """
    Fit C and K on a (particle, reference) trajectory pair.

    The growth rate comes from least squares of log W_p(t) on t and is
    clipped at 0. ``prefactor`` is read off the fitted intercept;
    ``prefactor_envelope`` is the smallest K for which the bound with the
    fitted rate holds at every sample.
    """
    check_sampling_grids(micro, reference)
    if reference.n < micro.n:
        raise ValidationError(
            f"Reference cloud ({reference.n}) smaller than the particle system ({micro.n})",
            field="reference",
        )
    if micro.dim != reference.dim:
        raise ValidationError("Trajectories have different dimensions", field="dim")

    fitted_c_dist = fit_distance_rate(micro, workers=workers)

    w_series, w_estimator, w_floor = [], "dense", 0.0
    for k, (sample, cloud) in enumerate(zip(micro.configs, reference.configs)):
        w = empirical_distance(sample, cloud, p, seed=seed + k, estimator=estimator, workers=workers)
        w_series.append(w.value)
        w_estimator, w_floor = w.estimator, w.floor

    initial = distance_report(micro.initial, delta_n, workers=workers)
    penalty = absorbable_lhs(micro.n, micro.kernel.alpha, p, initial.close_mass, initial.d_min)
    baseline = w_series[0] + penalty

    times = np.asarray(micro.sample_times, dtype=float)
    logs = np.log(np.maximum(np.asarray(w_series), np.finfo(float).tiny))
    if len(times) >= 2 and np.ptp(logs) > 0:
        fit = stats.linregress(times, logs)
        slope, intercept, stderr = float(fit.slope), float(fit.intercept), float(fit.stderr)
    else:
        slope, intercept = 0.0, float(logs[0])
        stderr = 0.0 if len(times) >= 2 else math.nan
    fitted_c_wp = max(0.0, slope)
    if fitted_c_wp == 0.0 and len(times) >= 2:
        intercept = float(np.mean(logs))

    if baseline > 0:
        prefactor = math.exp(intercept) / baseline
        margins = [w / (baseline * math.exp(fitted_c_wp * t)) for t, w in zip(times, w_series)]
    else:
        prefactor = math.inf if any(w > 0 for w in w_series) else 0.0
        margins = [math.inf if w > 0 else 0.0 for w in w_series]

    report = ConclusionReport(
        p=p,
        delta_n=delta_n,
        sample_times=[float(t) for t in times],
        w_series=w_series,
        fitted_c_dist=fitted_c_dist,
        fitted_c_wp=fitted_c_wp,
        fitted_c_wp_stderr=stderr,
        prefactor=prefactor,
        prefactor_envelope=max(margins) if margins else math.nan,
        penalty=penalty,
        margins=margins,
        w_estimator=w_estimator,
        w_floor=w_floor,
    )
    logger.info(
        "Conclusions N=%d: C_dist=%.4g C_wp=%.4g K=%.4g",
        micro.n, fitted_c_dist, fitted_c_wp, report.prefactor_envelope,
    )
    return report
