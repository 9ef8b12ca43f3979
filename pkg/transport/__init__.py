"""
transport: exact discrete optimal transport.

Usage::

    from transport import PointCloud, wasserstein

    result = wasserstein(PointCloud(x), PointCloud(y), p=2)
    result.value, result.plan
"""

from .models import EmpiricalDistance, PointCloud, TransportResult
from .services import (
    brute_force_wasserstein,
    choose_estimator,
    discretization_floor,
    empirical_distance,
    plan_rows,
    wasserstein,
    wasserstein_inf,
    wasserstein_p,
)

__all__ = [
    "PointCloud",
    "TransportResult",
    "EmpiricalDistance",
    "wasserstein",
    "wasserstein_p",
    "wasserstein_inf",
    "brute_force_wasserstein",
    "empirical_distance",
    "choose_estimator",
    "discretization_floor",
    "plan_rows",
]
