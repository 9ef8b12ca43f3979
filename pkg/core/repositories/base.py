"""
Generic Base Repository
=======================

File-backed repository for run artifacts. Every file written through a
repository is checksummed so the run manifest can list it.

Usage:
    from core.repositories import BaseArtifactRepository

    class RunRepository(BaseArtifactRepository):
        def save_report(self, name, report):
            return self.write_json(f"{name}.json", report.to_dict())
"""

import csv
import hashlib
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence


def format_number(value: Any) -> str:
    """Shortest round-trip decimal for floats; plain str for everything else."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(float(value))
    if hasattr(value, "item"):
        # numpy scalars
        return format_number(value.item())
    return str(value)


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy types and non-finite floats for JSON output."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return to_jsonable(value.tolist())
    if isinstance(value, float) and not math.isfinite(value):
        return format_number(value)
    return value


class BaseArtifactRepository:
    """
    Repository over one output directory.

    Subclasses add domain-specific ``save_*`` / ``load_*`` methods on top of
    ``write_json``, ``write_csv`` and ``write_text``.
    """

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.checksums: dict[str, str] = {}

    # ── Write ─────────────────────────────────────────────────────────

    def write_text(self, relative: str, text: str) -> Path:
        """Write UTF-8 text and record its checksum."""
        path = self.root / relative
        path.parent.mkdir(parents=True, exist_ok=True)
        data = text.encode("utf-8")
        path.write_bytes(data)
        self.checksums[relative] = hashlib.sha256(data).hexdigest()
        return path

    def write_json(self, relative: str, payload: Any) -> Path:
        """Write a JSON document with sorted keys."""
        text = json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n"
        return self.write_text(relative, text)

    def write_csv(self, relative: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        """Write CSV rows with shortest round-trip float formatting."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_number(v) for v in row])
        return self.write_text(relative, buffer.getvalue())

    # ── Read ──────────────────────────────────────────────────────────

    def read_json(self, relative: str) -> Any:
        return json.loads((self.root / relative).read_text(encoding="utf-8"))

    def exists(self, relative: str) -> bool:
        return (self.root / relative).exists()

    @staticmethod
    def checksum(path: Path | str) -> Optional[str]:
        """SHA-256 of a file on disk, or None if it does not exist."""
        path = Path(path)
        if not path.exists():
            return None
        return hashlib.sha256(path.read_bytes()).hexdigest()
