"""
Monte Carlo Models

Initial densities, probability estimates and the study report.
"""

import itertools
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy import stats

from core.exceptions import ValidationError


class DensityFamily(str, Enum):
    """Pushforwards of the uniform measure on the unit cube."""
    UNIFORM_CUBE = "uniform-cube"
    AFFINE = "affine"
    SINE_WARP = "sine-warp"


@dataclass(frozen=True, eq=False)
class DensitySpec:
    """
    rho0 = Phi_# 1_Q with Q = [0, 1]^d and

        uniform-cube  Phi(u) = u
        affine        Phi(u) = A u + b, A invertible
        sine-warp     Phi(u)_k = u_k + a sin(2 pi u_(k+1)), indices cyclic, a < 1/(2 pi)
    """

    family: DensityFamily
    dimension: int
    matrix: Optional[np.ndarray] = None
    shift: Optional[np.ndarray] = None
    amplitude: float = 0.0

    def __post_init__(self):
        family = DensityFamily(self.family)
        object.__setattr__(self, "family", family)
        if self.dimension < 2:
            raise ValidationError(f"Density dimension must be >= 2 (got {self.dimension})", field="dimension")
        d = self.dimension

        if family is DensityFamily.AFFINE:
            matrix = np.array(self.matrix if self.matrix is not None else np.eye(d), dtype=float)
            shift = np.array(self.shift if self.shift is not None else np.zeros(d), dtype=float)
            if matrix.shape != (d, d) or shift.shape != (d,):
                raise ValidationError(f"Affine map needs a {d}x{d} matrix and a length-{d} shift", field="matrix")
            if not (np.all(np.isfinite(matrix)) and np.all(np.isfinite(shift))):
                raise ValidationError("Affine map must be finite", field="matrix")
            if abs(np.linalg.det(matrix)) <= 1e-12:
                raise ValidationError("Affine matrix must be invertible", field="matrix")
            matrix.setflags(write=False)
            shift.setflags(write=False)
            object.__setattr__(self, "matrix", matrix)
            object.__setattr__(self, "shift", shift)

        if family is DensityFamily.SINE_WARP:
            if not 0 <= self.amplitude < 1.0 / (2.0 * math.pi):
                raise ValidationError(
                    f"Sine-warp amplitude must lie in [0, 1/(2 pi)) (got {self.amplitude})", field="amplitude",
                )

    # ── Constructors ──────────────────────────────────────────────────

    @classmethod
    def uniform_cube(cls, dimension: int) -> "DensitySpec":
        return cls(DensityFamily.UNIFORM_CUBE, int(dimension))

    @classmethod
    def affine(cls, matrix, shift) -> "DensitySpec":
        matrix = np.asarray(matrix, dtype=float)
        return cls(DensityFamily.AFFINE, matrix.shape[0], matrix=matrix, shift=shift)

    @classmethod
    def sine_warp(cls, dimension: int, amplitude: float) -> "DensitySpec":
        return cls(DensityFamily.SINE_WARP, int(dimension), amplitude=float(amplitude))

    # ── Map and analytic constants ────────────────────────────────────

    def push(self, u: np.ndarray) -> np.ndarray:
        """Apply Phi to points of the unit cube, shape (n, d)."""
        if self.family is DensityFamily.AFFINE:
            return u @ self.matrix.T + self.shift
        if self.family is DensityFamily.SINE_WARP:
            return u + self.amplitude * np.sin(2.0 * math.pi * np.roll(u, -1, axis=1))
        return u

    @property
    def lipschitz_const(self) -> float:
        if self.family is DensityFamily.AFFINE:
            return float(np.linalg.norm(self.matrix, 2))
        if self.family is DensityFamily.SINE_WARP:
            return 1.0 + 2.0 * math.pi * self.amplitude
        return 1.0

    @property
    def sup_density(self) -> float:
        """||rho0||_inf."""
        if self.family is DensityFamily.AFFINE:
            return 1.0 / abs(float(np.linalg.det(self.matrix)))
        if self.family is DensityFamily.SINE_WARP:
            return (1.0 - 2.0 * math.pi * self.amplitude) ** -self.dimension
        return 1.0

    @property
    def support_diameter(self) -> float:
        """Diameter of supp rho0 (an upper bound for sine-warp)."""
        d = self.dimension
        if self.family is DensityFamily.AFFINE:
            corners = np.array(list(itertools.product((-1.0, 1.0), repeat=d)))
            # u - v ranges over [-1, 1]^d; the norm is maximal at a corner
            return float(np.max(np.linalg.norm(corners @ self.matrix.T, axis=1)))
        if self.family is DensityFamily.SINE_WARP:
            return math.sqrt(d) * (1.0 + 2.0 * self.amplitude)
        return math.sqrt(d)

    def to_dict(self) -> dict:
        result = {"family": self.family.value, "dimension": self.dimension}
        if self.family is DensityFamily.AFFINE:
            result["A"] = self.matrix.tolist()
            result["b"] = self.shift.tolist()
        if self.family is DensityFamily.SINE_WARP:
            result["amplitude"] = self.amplitude
        return result


@dataclass
class ProbabilityEstimate:
    """Event frequency over replicas with a Wilson score interval."""
    successes: int
    replicas: int
    estimate: float
    lower: float
    upper: float
    confidence: float = 0.95

    @classmethod
    def from_counts(cls, successes: int, replicas: int, confidence: float = 0.95) -> "ProbabilityEstimate":
        if replicas < 1:
            raise ValidationError("At least one replica is needed", field="replicas")
        interval = stats.binomtest(int(successes), int(replicas)).proportion_ci(
            confidence_level=confidence, method="wilson",
        )
        estimate = successes / replicas
        return cls(
            int(successes), int(replicas), estimate,
            min(float(interval.low), estimate), max(float(interval.high), estimate), confidence,
        )

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def overlaps(self, other: "ProbabilityEstimate") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class MCPoint:
    """
    Result at one N: the event estimate (None for pure scaling studies),
    summary statistics of the per-replica statistic and the bound
    evaluated with the constant fitted at the smallest N.
    """

    n: int
    estimate: Optional[ProbabilityEstimate] = None
    mean_statistic: float = math.nan
    median_statistic: float = math.nan
    scaled_median: float = math.nan
    bound: Optional[float] = None
    breakdown: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        result = {
            "n": self.n,
            "estimate": self.estimate.to_dict() if self.estimate else None,
            "mean_statistic": self.mean_statistic,
            "median_statistic": self.median_statistic,
            "scaled_median": self.scaled_median,
            "bound": self.bound,
        }
        if self.breakdown:
            result["breakdown"] = {key: value.to_dict() for key, value in self.breakdown.items()}
        return result


@dataclass
class MCReport:
    """
    Outcome of one Monte Carlo study.

    ``raw_rows`` holds (n, replica, statistic, event) for every replica;
    ``fits`` maps a fitted quantity to {"value", "stderr", ...}.
    """

    estimator: str
    parameters: dict
    seed: int
    replicas: int
    points: list = field(default_factory=list)
    fits: dict = field(default_factory=dict)
    bound_constant: Optional[float] = None
    warnings: list = field(default_factory=list)
    raw_rows: list = field(default_factory=list)

    RAW_HEADER = ("n", "replica", "statistic", "event")

    def point(self, n: int) -> MCPoint:
        for point in self.points:
            if point.n == n:
                return point
        raise KeyError(n)

    @property
    def n_list(self) -> list[int]:
        return [point.n for point in self.points]

    def summary_rows(self) -> list[tuple]:
        rows = []
        for point in self.points:
            est = point.estimate
            rows.append((
                point.n,
                est.estimate if est else math.nan,
                est.lower if est else math.nan,
                est.upper if est else math.nan,
                point.median_statistic,
                point.scaled_median,
                point.bound if point.bound is not None else math.nan,
            ))
        return rows

    SUMMARY_HEADER = ("n", "estimate", "lower", "upper", "median_statistic", "scaled_median", "bound")

    def to_dict(self) -> dict:
        return {
            "estimator": self.estimator,
            "parameters": self.parameters,
            "seed": self.seed,
            "replicas": self.replicas,
            "points": [point.to_dict() for point in self.points],
            "fits": self.fits,
            "bound_constant": self.bound_constant,
            "warnings": self.warnings,
        }
