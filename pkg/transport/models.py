"""
Transport Models

Weighted point clouds and transport results.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from core.exceptions import ValidationError

WEIGHT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class PointCloud:
    """
    A discrete probability measure: m points with nonnegative weights
    summing to 1. ``weights=None`` means uniform weights 1/m.
    """

    points: np.ndarray
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        points = np.array(self.points, dtype=float, copy=True)
        if points.ndim == 1:
            points = points[:, None]
        if points.ndim != 2 or points.shape[0] < 1:
            raise ValidationError(f"points must be an m x d array with m >= 1 (got shape {points.shape})", field="points")
        if not np.all(np.isfinite(points)):
            raise ValidationError("points must be finite", field="points")
        uniform = self.weights is None
        if uniform:
            weights = np.full(points.shape[0], 1.0 / points.shape[0])
        else:
            weights = np.array(self.weights, dtype=float, copy=True)
            if weights.shape != (points.shape[0],):
                raise ValidationError("weights must have one entry per point", field="weights")
            if np.any(weights < 0) or not np.all(np.isfinite(weights)):
                raise ValidationError("weights must be finite and >= 0", field="weights")
            if abs(weights.sum() - 1.0) > WEIGHT_TOLERANCE:
                raise ValidationError(f"weights sum to {weights.sum()!r}, expected 1", field="weights")
            uniform = bool(np.all(weights == weights[0]))
        points.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_uniform", uniform)

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def is_uniform(self) -> bool:
        return self._uniform

    def subset(self, indices: np.ndarray) -> "PointCloud":
        """Uniform cloud on the selected points."""
        return PointCloud(self.points[np.asarray(indices)])

    def shifted(self, vector) -> "PointCloud":
        return PointCloud(self.points + np.asarray(vector, dtype=float), None if self.is_uniform else self.weights)


@dataclass
class TransportResult:
    """
    W_p value with the plan that attains it.

    ``plan`` lists (i, j, mass) for every transported pair; ``optimal`` is
    the solver's optimality certificate. ``mass_error_bound`` is nonzero
    only when weights were rounded to an integer grid.
    """

    p: float
    value: float
    plan: list
    optimal: bool = True
    mass_error_bound: float = 0.0
    method: str = "assignment"

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "value": self.value,
            "optimal": self.optimal,
            "mass_error_bound": self.mass_error_bound,
            "method": self.method,
            "plan_size": len(self.plan),
        }


@dataclass
class EmpiricalDistance:
    """
    W_p between a sample and a reference cloud.

    ``estimator`` is "dense" for the exact distance against the whole
    reference, or "subsampled" for the median over ``resamples`` equal-size
    subsamples of it. ``floor`` is the reference discretization scale
    M^(-1/d).
    """

    value: float
    p: float
    estimator: str
    n: int
    m: int
    floor: float
    resamples: int = 1
    values: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "p": self.p,
            "estimator": self.estimator,
            "n": self.n,
            "m": self.m,
            "floor": self.floor,
            "resamples": self.resamples,
        }
