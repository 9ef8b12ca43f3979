"""
Particle Models

Immutable particle configurations and the distance statistics computed
from them. These are plain dataclasses; nothing here is persisted through
the ORM.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from core.exceptions import ValidationError


@dataclass(frozen=True, eq=False)
class ParticleConfig:
    """
    N labeled points in R^d at a timestamp.

    ``positions`` is copied on construction and made read-only, so a
    config can be shared between workers.
    """

    positions: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        positions = np.array(self.positions, dtype=float, copy=True)
        if positions.ndim != 2:
            raise ValidationError(f"positions must be an N x d array (got shape {positions.shape})", field="positions")
        if positions.shape[0] < 2:
            raise ValidationError(f"A configuration needs N >= 2 particles (got {positions.shape[0]})", field="positions")
        if positions.shape[1] < 1:
            raise ValidationError("positions must have at least one column", field="positions")
        if not np.all(np.isfinite(positions)):
            raise ValidationError("positions must be finite", field="positions")
        if not np.isfinite(self.time) or self.time < 0:
            raise ValidationError(f"time must be finite and >= 0 (got {self.time})", field="time")
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "time", float(self.time))

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    def at(self, positions: np.ndarray, time: float) -> "ParticleConfig":
        """A new configuration with the same labels at another time."""
        return ParticleConfig(positions, time)

    def bounding_diameter(self) -> float:
        """Diagonal of the bounding box; an upper bound for the diameter."""
        return float(np.linalg.norm(np.ptp(self.positions, axis=0)))


@dataclass
class DistanceReport:
    """
    Nearest-neighbour statistics of a configuration.

    ``d_min1`` is the smallest distance from any particle to a particle
    other than its nearest neighbour; it is +inf (``d_min1_defined``
    False) when N = 2. ``second_index`` and ``second_dist`` hold the
    second-nearest neighbour table (None when N = 2).
    """

    d_min: float
    nn_index: np.ndarray
    nn_dist: np.ndarray
    d_min1: float
    delta: float
    close_set: np.ndarray
    close_mass: float
    d_min1_defined: bool = True
    second_index: Optional[np.ndarray] = None
    second_dist: Optional[np.ndarray] = None
    time: float = 0.0
    cutoff_value: Optional[float] = None
    extras: dict = field(default_factory=dict)

    CSV_HEADER = ("t", "d_min", "d_min1", "close_mass", "S_value")

    def as_row(self) -> tuple:
        """(t, d_min, d_min1, close_mass, S_value) for the diagnostics CSV."""
        s_value = self.cutoff_value if self.cutoff_value is not None else float("nan")
        return (self.time, self.d_min, self.d_min1, self.close_mass, s_value)

    def to_dict(self) -> dict:
        return {
            "time": self.time,
            "d_min": self.d_min,
            "d_min1": self.d_min1,
            "d_min1_defined": self.d_min1_defined,
            "delta": self.delta,
            "close_set": self.close_set.tolist(),
            "close_mass": self.close_mass,
            "cutoff_value": self.cutoff_value,
        }


@dataclass
class CutoffSum:
    """Per-particle sums of d_ij^-beta over d_ij > delta, and their maximum."""
    per_particle: np.ndarray
    value: float
    beta: float
    delta: float


@dataclass
class NeighborIndex:
    """All pairs i < j with d_ij <= radius, in lexicographic order."""
    n: int
    radius: float
    pairs: np.ndarray
    distances: np.ndarray

    def __len__(self) -> int:
        return len(self.pairs)

    def adjacency(self) -> list[np.ndarray]:
        """Sorted neighbour list of every particle."""
        lists = [[] for _ in range(self.n)]
        for i, j in self.pairs.tolist():
            lists[i].append(j)
            lists[j].append(i)
        return [np.array(sorted(items), dtype=np.int64) for items in lists]
