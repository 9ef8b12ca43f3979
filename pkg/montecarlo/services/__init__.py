from .bounds import (
    close_pairs_bound,
    dmin1_tail_bound,
    fit_constant,
    pair_tail_bound,
    triple_event_bound,
    triple_pair_bound,
)
from .estimators import (
    estimate_close_pairs_tail,
    estimate_dmin1_tail,
    estimate_dmin_tail,
    estimate_triple_event,
    estimate_triple_pair,
    fit_power_law,
    run_estimator,
)
from .registry import (
    ESTIMATOR_REGISTRY,
    EstimatorConfig,
    EstimatorKind,
    get_estimator_config,
    get_estimators_by_kind,
)
from .sampling import density_sampler, derive, int_seed, replica_seeds, sample_config, sample_points
from .statistics import triple_event_bruteforce, triple_statistic
from .studies import assumptions_probability, cutoff_bound_study, wasserstein_scaling_study

__all__ = [
    "sample_config",
    "sample_points",
    "density_sampler",
    "replica_seeds",
    "derive",
    "int_seed",
    "run_estimator",
    "estimate_dmin_tail",
    "estimate_dmin1_tail",
    "estimate_triple_pair",
    "estimate_triple_event",
    "estimate_close_pairs_tail",
    "triple_statistic",
    "triple_event_bruteforce",
    "fit_power_law",
    "wasserstein_scaling_study",
    "assumptions_probability",
    "cutoff_bound_study",
    "pair_tail_bound",
    "triple_pair_bound",
    "dmin1_tail_bound",
    "triple_event_bound",
    "close_pairs_bound",
    "fit_constant",
    "ESTIMATOR_REGISTRY",
    "EstimatorConfig",
    "EstimatorKind",
    "get_estimator_config",
    "get_estimators_by_kind",
]
