"""
Hypothesis Checks
=================

Finite-N evaluation of the hypotheses of the deterministic convergence
estimate on an initial configuration, and the explicit cut-off-sum bound
in terms of W_p.

Asymptotic relations ("much larger", "much smaller", "tends to zero") are
turned into ratio thresholds from ``AssumptionThresholds``; the raw
statistics are always reported.
"""

import logging
import math
from typing import Optional

import numpy as np

from core.exceptions import ValidationError
from kernels import KernelSpec
from particles import DistanceReport, ParticleConfig, cutoff_sum, distance_report, neighbor_index
from transport import PointCloud, empirical_distance

from ..models import AssumptionReport, AssumptionThresholds, ConditionResult, CutoffSumBound
from .regime import absorbability_exponent

logger = logging.getLogger(__name__)


def _reference_cloud(reference, dim: int) -> PointCloud:
    cloud = reference if isinstance(reference, PointCloud) else PointCloud(getattr(reference, "positions", reference))
    if cloud.dim != dim:
        raise ValidationError(
            f"Reference cloud has dimension {cloud.dim}, configuration has {dim}", field="reference",
        )
    return cloud


def _alpha(kernel) -> float:
    return kernel.alpha if isinstance(kernel, KernelSpec) else float(kernel)


def _ordered_pairs(config_: ParticleConfig, radius: float, strict: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Ordered pairs (i, j) with d_ij <= radius (or < radius), and d_ij."""
    if radius <= 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty, np.empty(0)
    index = neighbor_index(config_, radius)
    keep = index.distances < radius if strict else np.ones(len(index), dtype=bool)
    pairs, dist = index.pairs[keep], index.distances[keep]
    first = np.concatenate([pairs[:, 0], pairs[:, 1]])
    second = np.concatenate([pairs[:, 1], pairs[:, 0]])
    return first, second, np.concatenate([dist, dist])


def _nearest_excluding(report: DistanceReport, i: np.ndarray, excluded: np.ndarray) -> np.ndarray:
    """min over k not in {i, excluded} of d_ik, from the two-neighbour table."""
    first = report.nn_index[i] != excluded
    return np.where(first, report.nn_dist[i], report.second_dist[i])


def wp_condition(n: int, d: int, alpha: float, delta_n: float, p: float,
                 w_p0: float, close_mass: float, d_min: float) -> float:
    """
    Left side of the W_p hypothesis:

        (N^((alpha+1)/d) delta^(alpha+1))^-1 (W^((d-alpha-1)p/(d+p))
            + (N^-p rho_N(D) d_min^(-alpha p))^((d-alpha-1)/(d+p)))

    and, for p = inf, the same with exponents d-alpha-1 and N^-1 d_min^-alpha.
    """
    prefactor = 1.0 / (n ** ((alpha + 1.0) / d) * delta_n ** (alpha + 1.0))
    gap = d - alpha - 1.0
    if math.isinf(p):
        if d_min == 0:
            return math.inf
        first = w_p0 ** gap
        second = (d_min ** -alpha / n) ** gap
        return prefactor * (first + second)
    if close_mass > 0 and d_min == 0:
        return math.inf
    first = w_p0 ** (gap * p / (d + p))
    if close_mass > 0:
        log_inner = -p * math.log(n) + math.log(close_mass) - alpha * p * math.log(d_min)
        second = math.exp(log_inner * gap / (d + p))
    else:
        second = 0.0
    return prefactor * (first + second)


def absorbable_lhs(n: int, alpha: float, p: float, close_mass: float, d_min: float) -> float:
    """
    N^-1 rho_N(D_delta)^(1/p) d_min^-alpha.

    For p = inf the mass factor drops out and the term is N^-1 d_min^-alpha,
    whether or not D_delta is empty.
    """
    if math.isinf(p):
        return math.inf if d_min == 0 else d_min ** -alpha / n
    if close_mass == 0:
        return 0.0
    if d_min == 0:
        return math.inf
    return close_mass ** (1.0 / p) * d_min ** -alpha / n


def check_assumptions(
    config0: ParticleConfig,
    reference_cloud,
    kernel,
    delta_n: float,
    p: float,
    thresholds: Optional[AssumptionThresholds] = None,
    eps: float = 0.0,
    seed: int = 0,
    estimator: str = "auto",
    workers: int = 1,
) -> AssumptionReport:
    """
    Evaluate every hypothesis on ``config0``.

    ``kernel`` is a ``KernelSpec`` or the exponent alpha. A delta_N above
    d_min,1 is recorded as a failed condition, not raised.
    """
    thresholds = thresholds or AssumptionThresholds.from_defaults()
    n, d = config0.n, config0.dim
    alpha = _alpha(kernel)
    if not delta_n >= 0:
        raise ValidationError(f"delta_n must be >= 0 (got {delta_n})", field="delta_n")
    reference = _reference_cloud(reference_cloud, d)

    report = distance_report(config0, delta_n, workers=workers)
    w = empirical_distance(config0, reference, p, seed=seed, estimator=estimator, workers=workers)

    conv_value = w.value * n ** (1.0 / d) / math.log(n)
    cond_conv = ConditionResult(conv_value <= thresholds.conv_cutoff, conv_value, thresholds.conv_cutoff)

    wp_value = wp_condition(n, d, alpha, delta_n, p, w.value, report.close_mass, report.d_min) if delta_n > 0 else math.inf
    cond_wp = ConditionResult(wp_value <= thresholds.wp_cutoff, wp_value, thresholds.wp_cutoff)

    # separation: d_ij <= delta_N  =>  d_ik >= theta_sep delta_N for all other k
    i, j, _ = _ordered_pairs(config0, delta_n, strict=False)
    if len(i) and n >= 3:
        worst_ratio = float(np.min(_nearest_excluding(report, i, j)) / delta_n)
    else:
        worst_ratio = math.inf
    cond_strong1 = ConditionResult(worst_ratio >= thresholds.theta_sep, worst_ratio, thresholds.theta_sep, len(i))

    # smallness: d_ik < delta_N  =>  N^-1 d_ij^-1 d_ik^-alpha <= theta_small
    i, k, d_ik = _ordered_pairs(config0, delta_n, strict=True)
    if len(i) and n >= 3:
        d_ij = _nearest_excluding(report, i, k)
        with np.errstate(divide="ignore"):
            statistic = 1.0 / (n * d_ij * d_ik ** alpha)
        worst_value = float(np.max(statistic))
    else:
        worst_value = 0.0
    cond_strong2 = ConditionResult(worst_value <= thresholds.theta_small, worst_value, thresholds.theta_small, len(i))

    lhs = absorbable_lhs(n, alpha, p, report.close_mass, report.d_min)
    cond_absorbable = ConditionResult(lhs <= w.value, lhs, w.value)
    exponent = absorbability_exponent(d, alpha, p, eps)

    result = AssumptionReport(
        n=n,
        dim=d,
        alpha=alpha,
        p=p,
        delta_n=delta_n,
        d_min=report.d_min,
        d_min1=report.d_min1,
        close_mass=report.close_mass,
        w_p0=w.value,
        w_estimator=w.estimator,
        w_floor=w.floor,
        delta_ok=delta_n <= report.d_min1,
        cond_conv=cond_conv,
        cond_wp=cond_wp,
        cond_strong1=cond_strong1,
        cond_strong2=cond_strong2,
        cond_absorbable=cond_absorbable,
        absorb_exponent=exponent,
        absorb_exponent_ok=exponent < -1.0 / d,
        thresholds=thresholds,
    )
    logger.debug("Assumptions N=%d: %s", n, result.conditions())
    return result


def cutoff_sum_bound_rhs(beta: float, d: int, p: float, n: int, delta: float, m_count: int,
                         rho_inf: float, w_p: float) -> float:
    """
    Explicit right side of the cut-off-sum estimate

        s^(b/d) + (A s^((d-b)p/(d(d+p))) + (A s^((d-b)/d))^((b+p)/(d+p))) W^((d-b)p/(d+p))

    with A = M^(b/d) N^(-b/d) delta^-b and s = ||sigma||_inf; for p = inf
    the bracket is A s^((d-b)/d) W^(d-b).
    """
    a = m_count ** (beta / d) / (n ** (beta / d) * delta ** beta)
    base = rho_inf ** (beta / d)
    if math.isinf(p):
        return base + a * rho_inf ** ((d - beta) / d) * w_p ** (d - beta)
    first = a * rho_inf ** ((d - beta) / d * p / (d + p))
    second = (a * rho_inf ** ((d - beta) / d)) ** ((beta + p) / (d + p))
    return base + (first + second) * w_p ** ((d - beta) * p / (d + p))


def ball_count(config_: ParticleConfig, delta: float) -> int:
    """max_i #{j : |X_j - X_i| < delta}, counting i itself."""
    index = neighbor_index(config_, delta)
    close = index.pairs[index.distances < delta]
    counts = np.ones(config_.n, dtype=np.int64)
    np.add.at(counts, close[:, 0], 1)
    np.add.at(counts, close[:, 1], 1)
    return int(counts.max())


def check_cutoff_sum_bound(
    config_: ParticleConfig,
    reference_cloud,
    beta: float,
    delta: float,
    p: float,
    rho_inf: float,
    seed: int = 0,
    estimator: str = "auto",
    workers: int = 1,
) -> CutoffSumBound:
    """
    Compare (1/N) S_(beta, delta) with its explicit bound in terms of
    W_p(rho_N, sigma), M and ||sigma||_inf.
    """
    d = config_.dim
    if not 0 < beta < d:
        raise ValidationError(f"beta must lie in (0, d) = (0, {d}) (got {beta})", field="beta")
    if not delta > 0:
        raise ValidationError(f"delta must be > 0 (got {delta})", field="delta")
    if not rho_inf > 0:
        raise ValidationError(f"rho_inf must be > 0 (got {rho_inf})", field="rho_inf")
    reference = _reference_cloud(reference_cloud, d)

    lhs = cutoff_sum(config_, beta, delta, workers=workers).value / config_.n
    m_count = ball_count(config_, delta)
    w = empirical_distance(config_, reference, p, seed=seed, estimator=estimator, workers=workers)
    rhs = cutoff_sum_bound_rhs(beta, d, p, config_.n, delta, m_count, rho_inf, w.value)
    return CutoffSumBound(
        lhs=lhs,
        rhs=rhs,
        ratio=lhs / rhs,
        beta=beta,
        delta=delta,
        p=p,
        m_count=m_count,
        w_p=w.value,
        rho_inf=rho_inf,
    )
