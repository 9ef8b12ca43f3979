from .assumptions import (
    absorbable_lhs,
    ball_count,
    check_assumptions,
    check_cutoff_sum_bound,
    cutoff_sum_bound_rhs,
    wp_condition,
)
from .bootstrap import bootstrap_monitor
from .conclusions import check_conclusions, fit_distance_rate, min_distance_ratio
from .regime import (
    absorbability_exponent,
    alpha_threshold,
    p_threshold,
    regime_warnings,
    select_delta,
)

__all__ = [
    "select_delta",
    "alpha_threshold",
    "p_threshold",
    "absorbability_exponent",
    "regime_warnings",
    "check_assumptions",
    "wp_condition",
    "absorbable_lhs",
    "check_cutoff_sum_bound",
    "cutoff_sum_bound_rhs",
    "ball_count",
    "check_conclusions",
    "fit_distance_rate",
    "min_distance_ratio",
    "bootstrap_monitor",
]
