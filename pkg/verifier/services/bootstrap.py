"""
Bootstrap monitor.

Tracks along a recorded run the quantities the stability argument
bootstraps on: delta(t) = delta_N e^(-2 L1 t) / 2, the far-field sum
S_(alpha+1, delta(t)) / N and d_min,1(t) >= delta(t).
"""

import logging
import math

from core.exceptions import ValidationError
from particles import cutoff_sum, distance_report

from ..models import BootstrapSeries
from .conclusions import min_distance_ratio

logger = logging.getLogger(__name__)


def bootstrap_monitor(micro, delta_n: float, l1: float, alpha: float, workers: int = 1) -> BootstrapSeries:
    """
    Evaluate the bootstrap quantities at every recorded sample.

    ``l1 = 0`` keeps delta constant. The pairwise check compares every
    d_ij(t) with e^(-2 L1 t) d_ij(0) / 2.
    """
    if not delta_n > 0:
        raise ValidationError(f"delta_n must be > 0 (got {delta_n})", field="delta_n")
    if not l1 >= 0 or math.isinf(l1):
        raise ValidationError(f"L1 must be finite and >= 0 (got {l1})", field="l1")

    series = BootstrapSeries(delta_n=delta_n, l1=l1, alpha=alpha)
    for t, current in zip(micro.sample_times, micro.configs):
        decay = math.exp(-2.0 * l1 * t)
        delta_t = 0.5 * delta_n * decay
        report = distance_report(current, delta_t, workers=workers)
        s_value = cutoff_sum(current, alpha + 1.0, delta_t, workers=workers).value
        pair_ratio = min_distance_ratio(micro.initial, current, workers=workers) / (0.5 * decay)

        series.times.append(float(t))
        series.delta.append(delta_t)
        series.s_over_n.append(s_value / current.n)
        series.d_min1.append(report.d_min1)
        series.flags.append(bool(report.d_min1 < delta_t))
        series.pair_ratio.append(pair_ratio)
        series.pair_flags.append(bool(pair_ratio < 1.0))

    if series.any_flag:
        logger.warning("Bootstrap violated at %d of %d samples", sum(series.flags), len(series.times))
    return series
