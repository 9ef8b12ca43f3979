"""
montecarlo: replica studies over i.i.d. initial configurations.

Usage::

    from montecarlo import DensitySpec, estimate_dmin_tail

    report = estimate_dmin_tail(DensitySpec.uniform_cube(2), [250, 1000], L=2.0, replicas=200, seed=7)
    report.point(1000).estimate
"""

from .models import DensityFamily, DensitySpec, MCPoint, MCReport, ProbabilityEstimate
from .services import (
    ESTIMATOR_REGISTRY,
    assumptions_probability,
    cutoff_bound_study,
    estimate_close_pairs_tail,
    estimate_dmin1_tail,
    estimate_dmin_tail,
    estimate_triple_event,
    estimate_triple_pair,
    run_estimator,
    sample_config,
    wasserstein_scaling_study,
)

__all__ = [
    "DensityFamily",
    "DensitySpec",
    "ProbabilityEstimate",
    "MCPoint",
    "MCReport",
    "sample_config",
    "run_estimator",
    "estimate_dmin_tail",
    "estimate_dmin1_tail",
    "estimate_triple_pair",
    "estimate_triple_event",
    "estimate_close_pairs_tail",
    "wasserstein_scaling_study",
    "assumptions_probability",
    "cutoff_bound_study",
    "ESTIMATOR_REGISTRY",
]
