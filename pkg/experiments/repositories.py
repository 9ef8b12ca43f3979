"""
Run Repository

One directory per run:

    manifest.json        spec hash, version, wall clock, checksums, acceptance
    report.json          mode-specific report
    *.csv                trajectories, series, Monte Carlo summaries and raw replicas
    plans/*.csv          optional transport plans

Every file except the manifest is covered by the determinism contract; the
manifest records wall clock and thread count and differs between runs.
"""

import logging
from pathlib import Path

from core.exceptions import ValidationError
from core.repositories import BaseArtifactRepository
from dynamics import Trajectory
from dynamics.repositories import TrajectoryRepository
from montecarlo import MCReport

from .models import RunManifest

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"
REPORT = "report.json"


class RunRepository(BaseArtifactRepository):
    """Artifacts of one experiment run."""

    def __init__(self, root: Path | str):
        super().__init__(root)
        self.trajectories = TrajectoryRepository(self.root)

    # ── Save ──────────────────────────────────────────────────────────

    def save_trajectory(self, relative: str, trajectory: Trajectory) -> Path:
        path = self.trajectories.save(relative, trajectory)
        self.checksums.update(self.trajectories.checksums)
        return path

    def save_report(self, payload: dict, relative: str = REPORT) -> Path:
        return self.write_json(relative, payload)

    def save_mc_report(self, report: MCReport, mode: str) -> list[Path]:
        """The report plus per-N summary and raw replica CSVs."""
        return [
            self.save_report({"mode": mode, **report.to_dict()}),
            self.write_csv("summary.csv", MCReport.SUMMARY_HEADER, report.summary_rows()),
            self.write_csv("replicas.csv", MCReport.RAW_HEADER, report.raw_rows),
        ]

    def save_plan(self, name: str, rows: list[tuple]) -> Path:
        return self.write_csv(f"plans/{name}.csv", ("i", "j", "mass", "distance"), rows)

    def save_manifest(self, manifest: RunManifest) -> Path:
        """Write the manifest over every file written so far."""
        manifest.files = {name: digest for name, digest in sorted(self.checksums.items()) if name != MANIFEST}
        path = self.write_json(MANIFEST, manifest.to_dict())
        self.checksums.pop(MANIFEST, None)
        logger.info("Manifest lists %d files under %s", len(manifest.files), self.root)
        return path

    # ── Load ──────────────────────────────────────────────────────────

    def load_manifest(self) -> dict:
        if not self.exists(MANIFEST):
            raise ValidationError(f"No {MANIFEST} under {self.root}", field="out")
        return self.read_json(MANIFEST)

    def load_report(self, relative: str = REPORT) -> dict:
        if not self.exists(relative):
            raise ValidationError(f"No {relative} under {self.root}", field="out")
        return self.read_json(relative)

    def verify_checksums(self, manifest: dict) -> list[str]:
        """Files whose on-disk checksum differs from the manifest (or are missing)."""
        return [
            name for name, digest in sorted(manifest.get("files", {}).items())
            if self.checksum(self.root / name) != digest
        ]
