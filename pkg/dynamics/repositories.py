"""
Trajectory Repository

Persists trajectories as one text file: a ``#``-prefixed JSON header line
(N, d, kernel, controls, seed, status) followed by a CSV block with one row
per sample time:

    t, x_0_0, ..., x_(N-1)_(d-1), d_min, d_min1, close_mass, S_value

Floats are written in shortest round-trip form, so a reload reproduces the
positions bit for bit.
"""

import csv
import io
import json
import logging
from pathlib import Path

import numpy as np

from core.exceptions import ValidationError
from core.repositories import BaseArtifactRepository, format_number, to_jsonable
from kernels import KernelSpec
from particles import DistanceReport, ParticleConfig

from .models import IntegratorControls, Trajectory

logger = logging.getLogger(__name__)

FORMAT = "meanfield-trajectory"
FORMAT_VERSION = 1


class TrajectoryRepository(BaseArtifactRepository):
    """Save and load ``Trajectory`` objects under an output directory."""

    def header(self, trajectory: Trajectory) -> dict:
        return {
            "format": FORMAT,
            "version": FORMAT_VERSION,
            "n": trajectory.n,
            "dim": trajectory.dim,
            "kernel": trajectory.kernel.to_dict(),
            "controls": trajectory.controls.to_dict(),
            "seed": trajectory.seed,
            "status": trajectory.status,
            "metadata": trajectory.metadata,
        }

    @staticmethod
    def columns(n: int, dim: int) -> list[str]:
        coords = [f"x_{i}_{k}" for i in range(n) for k in range(dim)]
        return ["t", *coords, *DistanceReport.CSV_HEADER[1:]]

    def save(self, relative: str, trajectory: Trajectory) -> Path:
        buffer = io.StringIO()
        buffer.write("# " + json.dumps(to_jsonable(self.header(trajectory)), sort_keys=True) + "\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns(trajectory.n, trajectory.dim))
        nan = float("nan")
        for config_, report in zip(trajectory.configs, trajectory.diagnostics):
            stats = report.as_row()[1:] if report is not None else (nan, nan, nan, nan)
            row = [config_.time, *config_.positions.ravel().tolist(), *stats]
            writer.writerow([format_number(v) for v in row])
        path = self.write_text(relative, buffer.getvalue())
        logger.debug("Saved trajectory (%d samples) to %s", len(trajectory.configs), path)
        return path

    def load(self, relative: str) -> Trajectory:
        path = self.root / relative
        with path.open(encoding="utf-8") as handle:
            first = handle.readline()
            if not first.startswith("# "):
                raise ValidationError(f"{path} has no trajectory header", field="path")
            header = json.loads(first[2:])
            if header.get("format") != FORMAT:
                raise ValidationError(f"{path} is not a trajectory file", field="path")
            reader = csv.reader(handle)
            columns = next(reader)
            rows = [row for row in reader if row]

        n, dim = header["n"], header["dim"]
        if columns != self.columns(n, dim):
            raise ValidationError(f"{path} has unexpected columns", field="path")
        controls = IntegratorControls(**header["controls"])
        trajectory = Trajectory(
            kernel=KernelSpec.from_dict(header["kernel"]),
            controls=controls,
            seed=header.get("seed"),
            status=header.get("status", "complete"),
            metadata=header.get("metadata", {}),
        )
        stats = []
        for row in rows:
            values = [float(v) for v in row]
            positions = np.array(values[1:1 + n * dim]).reshape(n, dim)
            trajectory.record(ParticleConfig(positions, values[0]), None)
            stats.append(values[1 + n * dim:])
        trajectory.metadata["diagnostics_rows"] = stats
        return trajectory
