"""
Dynamics Models

Integrator controls and time-sampled trajectories.
"""

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from core.exceptions import ValidationError
from kernels import KernelSpec
from meanfield.config import config
from particles import DistanceReport, ParticleConfig

SCHEMES = ("rk4", "heun")


@dataclass(frozen=True)
class IntegratorControls:
    """
    Explicit time-stepping controls.

    ``eta`` bounds the relative motion of the closest pair per step.
    ``diagnostic_delta`` (if set) is the delta of the recorded close sets
    and cut-off sums. ``record_diagnostics`` can be switched off for large
    reference clouds.
    """

    scheme: str = "rk4"
    dt_max: float = 0.05
    eta: float = 0.1
    d_floor: float = 0.0
    record_every: float = 0.1
    diagnostic_delta: Optional[float] = None
    record_diagnostics: bool = True

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValidationError(f"scheme must be one of {SCHEMES} (got '{self.scheme}')", field="scheme")
        if not self.dt_max > 0:
            raise ValidationError("dt_max must be > 0", field="dt_max")
        if not 0 < self.eta < 1:
            raise ValidationError("eta must lie in (0, 1)", field="eta")
        if not self.d_floor >= 0:
            raise ValidationError("d_floor must be >= 0", field="d_floor")
        if not self.record_every > 0:
            raise ValidationError("record_every must be > 0", field="record_every")
        if self.diagnostic_delta is not None and not self.diagnostic_delta > 0:
            raise ValidationError("diagnostic_delta must be > 0", field="diagnostic_delta")

    @classmethod
    def from_defaults(cls, **overrides) -> "IntegratorControls":
        """Controls from ``LAB_*`` environment defaults, with overrides."""
        defaults = config.integrator
        values = {
            "scheme": defaults.scheme,
            "dt_max": defaults.dt_max,
            "eta": defaults.eta,
            "d_floor": defaults.d_floor,
            "record_every": defaults.record_every,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Trajectory:
    """
    Time-sampled configurations of one run.

    ``diagnostics[k]`` is the distance report of ``configs[k]`` (None when
    diagnostics are off). ``step_log`` holds every accepted step size.
    ``status`` is "complete" or "aborted".
    """

    kernel: KernelSpec
    controls: IntegratorControls
    sample_times: list = field(default_factory=list)
    configs: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    step_log: list = field(default_factory=list)
    seed: Optional[int] = None
    status: str = "complete"
    metadata: dict = field(default_factory=dict)

    def record(self, config_: ParticleConfig, report: Optional[DistanceReport]) -> None:
        if self.sample_times and config_.time <= self.sample_times[-1]:
            raise ValidationError(
                f"Sample time {config_.time} does not increase past {self.sample_times[-1]}",
                field="time",
            )
        self.sample_times.append(config_.time)
        self.configs.append(config_)
        self.diagnostics.append(report)

    @property
    def n(self) -> int:
        return self.configs[0].n

    @property
    def dim(self) -> int:
        return self.configs[0].dim

    @property
    def initial(self) -> ParticleConfig:
        return self.configs[0]

    @property
    def final(self) -> ParticleConfig:
        return self.configs[-1]

    @property
    def n_steps(self) -> int:
        return len(self.step_log)

    def positions(self) -> np.ndarray:
        """All recorded positions, shape (samples, N, d)."""
        return np.stack([c.positions for c in self.configs])

    def center_of_mass(self) -> np.ndarray:
        return self.positions().mean(axis=1)

    def summary(self) -> dict:
        return {
            "n": self.n,
            "dim": self.dim,
            "samples": len(self.sample_times),
            "t_final": self.sample_times[-1],
            "steps": self.n_steps,
            "dt_min": min(self.step_log) if self.step_log else None,
            "status": self.status,
        }
