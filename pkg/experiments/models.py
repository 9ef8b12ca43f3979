"""
Experiment Models

The validated experiment spec and the run manifest. Nothing here is
persisted in a database; both are written as JSON by ``RunRepository``.
"""

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from core.repositories import to_jsonable
from dynamics import IntegratorControls
from kernels import KernelSpec
from montecarlo import DensitySpec
from verifier import AssumptionThresholds


class Mode(str, Enum):
    SIMULATE = "simulate"
    VERIFY = "verify"
    MC_LEMMA = "mc-lemma"
    ASSUMPTIONS_PROB = "assumptions-prob"
    CONVERGENCE_STUDY = "convergence-study"


# mc-lemma estimators that are studies rather than registry entries
MC_STUDIES = ("wasserstein-scaling", "cutoff-bound")


@dataclass
class ExperimentSpec:
    """
    One validated experiment. ``raw`` keeps the JSON document as read
    (after the seed override) for hashing and for the manifest.
    """

    mode: Mode
    dimension: int
    seed: int
    kernel: Optional[KernelSpec] = None
    density: Optional[DensitySpec] = None
    positions: Optional[list] = None
    n_list: list = field(default_factory=list)
    T: Optional[float] = None
    p: Optional[float] = None
    eps: Optional[float] = None
    delta_n: Optional[float] = None
    thresholds: Optional[AssumptionThresholds] = None
    controls: Optional[IntegratorControls] = None
    replicas: Optional[int] = None
    reference_factor: Optional[int] = None
    which: Optional[str] = None
    params: dict = field(default_factory=dict)
    save_plans: bool = False
    output: Optional[str] = None
    raw: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.n_list[0]

    def spec_hash(self) -> str:
        canonical = json.dumps(to_jsonable(self.raw), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class AcceptanceCheck:
    """A named pass/fail check on run outputs; only hard checks fail ``--strict`` runs."""
    name: str
    passed: bool
    value: Optional[float] = None
    limit: Optional[float] = None
    hard: bool = True
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "limit": self.limit,
            "hard": self.hard,
            "detail": self.detail,
        }


@dataclass
class RunManifest:
    """Spec hash, version, wall clock and per-file checksums of one run."""
    spec_hash: str
    version: str
    mode: str
    seed: int
    threads: int
    started_at: str
    wall_clock_seconds: float
    files: dict
    status: str = "complete"
    exit_code: int = 0
    acceptance: list = field(default_factory=list)
    spec: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "spec_hash": self.spec_hash,
            "version": self.version,
            "mode": self.mode,
            "seed": self.seed,
            "threads": self.threads,
            "started_at": self.started_at,
            "wall_clock_seconds": self.wall_clock_seconds,
            "files": self.files,
            "status": self.status,
            "exit_code": self.exit_code,
            "acceptance": [check.to_dict() for check in self.acceptance],
            "spec": self.spec,
        }
