"""
Spec loading and pre-run diagnostics.
"""

import json
import logging
from pathlib import Path
from typing import Optional

from core.exceptions import ConfigurationError, ValidationError
from meanfield.config import config
from verifier import regime_warnings

from ..models import ExperimentSpec, Mode
from ..serializers import spec_from_dict

logger = logging.getLogger(__name__)

# Modes that start from i.i.d. initial data
IID_MODES = (Mode.VERIFY, Mode.ASSUMPTIONS_PROB, Mode.CONVERGENCE_STUDY)


def read_spec_document(path: Path | str) -> dict:
    """Parse a UTF-8 JSON spec file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigurationError(f"Cannot read spec file {path}: {exc}", setting="spec") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path} is not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}", field="spec",
        ) from exc
    return document


def load_spec(path: Path | str, seed: Optional[int] = None) -> ExperimentSpec:
    """Read and validate a spec file; ``seed`` overrides the spec's seed."""
    document = read_spec_document(path)
    if seed is not None and isinstance(document, dict):
        document["seed"] = int(seed)
    spec = spec_from_dict(document)
    logger.debug("Loaded %s spec from %s (hash %s)", spec.mode.value, path, spec.spec_hash()[:12])
    return spec


def spec_diagnostics(spec: ExperimentSpec) -> list[str]:
    """
    Warnings for a valid spec. Parameters outside the propagation-of-chaos
    regime are warnings only: the deterministic estimate still applies to
    prepared initial data.
    """
    warnings = []
    if spec.mode in IID_MODES and spec.kernel is not None and spec.p is not None:
        warnings.extend(regime_warnings(spec.dimension, spec.kernel.alpha, spec.p))
    if spec.mode in (Mode.VERIFY, Mode.CONVERGENCE_STUDY):
        factor = spec.reference_factor or config.verifier.reference_factor
        if factor < 10:
            warnings.append(f"reference_factor={factor} gives a reference cloud below 10 N")
    if spec.replicas is not None and spec.replicas < config.montecarlo.min_replicas:
        warnings.append(
            f"replicas={spec.replicas} is below the minimum of {config.montecarlo.min_replicas}; the run will be rejected"
        )
    return warnings
