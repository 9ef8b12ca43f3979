"""
Estimator Registry

Central table of the replica estimators. Each entry maps an estimator id
to its per-replica statistic, the parameters it needs, the analytic
bound it is compared with, and the N-exponent that makes its median
statistic N-uniform.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from . import bounds, statistics


class EstimatorKind(Enum):
    """What the event measures."""
    PAIR = "pair"          # one close pair
    TRIPLE = "triple"      # three mutually close particles
    COUNT = "count"        # number of particles with a close neighbour


@dataclass(frozen=True)
class EstimatorConfig:
    id: str
    name: str
    statistic: Callable
    params: tuple
    kind: EstimatorKind
    bound: Optional[Callable] = None
    # median statistic * N^(scale_power / d) is N-uniform
    scale_power: Optional[float] = None
    description: str = ""


# ─── All available estimators ───────────────────────────────────────
ESTIMATOR_REGISTRY: dict[str, EstimatorConfig] = {

    "dmin-tail": EstimatorConfig(
        id="dmin-tail",
        name="Minimal distance tail",
        statistic=statistics.dmin_tail,
        params=("L",),
        kind=EstimatorKind.PAIR,
        bound=bounds.pair_tail_bound,
        scale_power=2.0,
        description="P(d_min <= L^-1 N^(-2/d))",
    ),

    "dmin1-tail": EstimatorConfig(
        id="dmin1-tail",
        name="Second-neighbour distance tail",
        statistic=statistics.dmin1_tail,
        params=("L",),
        kind=EstimatorKind.TRIPLE,
        bound=bounds.dmin1_tail_bound,
        scale_power=1.5,
        description="P(d_min,1 <= L^-1 N^(-3/(2d)))",
    ),

    "triple-pair": EstimatorConfig(
        id="triple-pair",
        name="Triple proximity",
        statistic=statistics.triple_pair,
        params=("l1", "l2"),
        kind=EstimatorKind.TRIPLE,
        bound=bounds.triple_pair_bound,
        description="P(exists i != j != k: d_ij <= L1, d_ik <= L2)",
    ),

    "triple-event": EstimatorConfig(
        id="triple-event",
        name="Singular triple",
        statistic=statistics.triple_event,
        params=("beta", "eps", "delta"),
        kind=EstimatorKind.TRIPLE,
        bound=bounds.triple_event_bound,
        description="P(exists i != j != k: d_ik < delta, N^-1 d_ij^-1 d_ik^-beta >= N^-eps)",
    ),

    "close-pairs": EstimatorConfig(
        id="close-pairs",
        name="Close-pair count",
        statistic=statistics.close_pairs,
        params=("delta", "theta"),
        kind=EstimatorKind.COUNT,
        bound=bounds.close_pairs_bound,
        description="P(#{i : d_(i, i_nn) <= delta N^(-1/d)} >= 2 theta N)",
    ),
}


def get_estimator_config(estimator_id: str) -> EstimatorConfig | None:
    """Get configuration for a specific estimator."""
    return ESTIMATOR_REGISTRY.get(estimator_id)


def get_estimators_by_kind(kind: EstimatorKind) -> list[EstimatorConfig]:
    """Get estimators filtered by kind."""
    return [e for e in ESTIMATOR_REGISTRY.values() if e.kind == kind]
