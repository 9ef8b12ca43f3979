"""
verifier: finite-N checks of the convergence hypotheses and conclusions.

Usage::

    from verifier import select_delta, check_assumptions

    delta_n = select_delta(n, d, eps=0.02)
    report = check_assumptions(config0, reference_cloud, kernel, delta_n, p=4)
    report.all_passed
"""

from .models import (
    AssumptionReport,
    AssumptionThresholds,
    BootstrapSeries,
    ConclusionReport,
    ConditionResult,
    CutoffSumBound,
)
from .services import (
    absorbability_exponent,
    alpha_threshold,
    bootstrap_monitor,
    check_assumptions,
    check_conclusions,
    check_cutoff_sum_bound,
    p_threshold,
    regime_warnings,
    select_delta,
)

__all__ = [
    "AssumptionThresholds",
    "AssumptionReport",
    "ConditionResult",
    "ConclusionReport",
    "BootstrapSeries",
    "CutoffSumBound",
    "select_delta",
    "alpha_threshold",
    "p_threshold",
    "absorbability_exponent",
    "regime_warnings",
    "check_assumptions",
    "check_conclusions",
    "check_cutoff_sum_bound",
    "bootstrap_monitor",
]
