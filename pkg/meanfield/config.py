"""
Configuration Layer
===================

Centralized, type-safe configuration for every numerical default and
runtime knob. Replaces scattered magic numbers throughout the modules.

Usage:
    from meanfield.config import config

    # Verifier thresholds
    theta_sep = config.verifier.theta_sep

    # Row block for O(N^2) sweeps
    block = config.numerics.block_size

    # Worker pool size
    threads = config.runner.threads

Every field reads an environment variable with the ``LAB_`` prefix and
falls back to the documented default, so experiments can be re-tuned
without touching code.
"""

import os
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List

import psutil

# Load .env file if present (dev convenience)
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass  # python-dotenv not installed, rely on real env vars

logger = logging.getLogger(__name__)


def _env_float(name: str, default: str) -> float:
    return float(os.getenv(name, default))


def _env_int(name: str, default: str) -> int:
    return int(os.getenv(name, default))


def _default_threads() -> int:
    configured = os.getenv("LAB_THREADS", "")
    if configured:
        return int(configured)
    return psutil.cpu_count(logical=True) or 1


# =============================================================================
# Configuration Classes
# =============================================================================

@dataclass(frozen=True)
class NumericsConfig:
    """Shared numerical settings (sweeps, transport solvers, finite differences)."""
    block_size: int = field(default_factory=lambda: _env_int("LAB_BLOCK_SIZE", "512"))
    fd_step_relative: float = field(default_factory=lambda: _env_float("LAB_FD_STEP_RELATIVE", "1e-4"))
    bruteforce_max_points: int = field(default_factory=lambda: _env_int("LAB_BRUTEFORCE_MAX_POINTS", "8"))
    weight_grid_bits: int = field(default_factory=lambda: _env_int("LAB_WEIGHT_GRID_BITS", "40"))
    max_cost_entries: int = field(default_factory=lambda: _env_int("LAB_MAX_COST_ENTRIES", "64000000"))
    log_space_p: float = field(default_factory=lambda: _env_float("LAB_LOG_SPACE_P", "8"))
    certificate_samples: int = field(default_factory=lambda: _env_int("LAB_CERTIFICATE_SAMPLES", "2000"))


@dataclass(frozen=True)
class IntegratorDefaults:
    """Defaults for the explicit particle integrator."""
    scheme: str = field(default_factory=lambda: os.getenv("LAB_SCHEME", "rk4"))
    dt_max: float = field(default_factory=lambda: _env_float("LAB_DT_MAX", "0.05"))
    eta: float = field(default_factory=lambda: _env_float("LAB_ETA", "0.1"))
    d_floor: float = field(default_factory=lambda: _env_float("LAB_D_FLOOR", "0"))
    record_every: float = field(default_factory=lambda: _env_float("LAB_RECORD_EVERY", "0.1"))


@dataclass(frozen=True)
class VerifierDefaults:
    """Finite-N cutoffs that stand in for the asymptotic conditions."""
    theta_sep: float = field(default_factory=lambda: _env_float("LAB_THETA_SEP", "4"))
    theta_small: float = field(default_factory=lambda: _env_float("LAB_THETA_SMALL", "0.25"))
    conv_cutoff: float = field(default_factory=lambda: _env_float("LAB_CONV_CUTOFF", "1.0"))
    wp_cutoff: float = field(default_factory=lambda: _env_float("LAB_WP_CUTOFF", "1.0"))
    reference_factor: int = field(default_factory=lambda: _env_int("LAB_REFERENCE_FACTOR", "16"))
    inf_resamples: int = field(default_factory=lambda: _env_int("LAB_INF_RESAMPLES", "9"))


@dataclass(frozen=True)
class MonteCarloDefaults:
    """Defaults for replica studies."""
    epsilon: float = field(default_factory=lambda: _env_float("LAB_EPSILON", "0.02"))
    min_replicas: int = field(default_factory=lambda: _env_int("LAB_MIN_REPLICAS", "30"))
    confidence: float = field(default_factory=lambda: _env_float("LAB_CONFIDENCE", "0.95"))


@dataclass(frozen=True)
class RunnerConfig:
    """Experiment runner settings."""
    threads: int = field(default_factory=_default_threads)
    output_dir: str = field(default_factory=lambda: os.getenv("LAB_OUTPUT_DIR", "runs"))
    strict: bool = field(default_factory=lambda: os.getenv("LAB_STRICT", "false").lower() == "true")


@dataclass(frozen=True)
class LabConfig:
    """Main configuration - aggregates all config sections."""

    # Environment
    environment: str = field(default_factory=lambda: os.getenv("LAB_ENV", "development"))
    debug: bool = field(default_factory=lambda: os.getenv("DEBUG", "False").lower() == "true")

    # Sub-configurations
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    integrator: IntegratorDefaults = field(default_factory=IntegratorDefaults)
    verifier: VerifierDefaults = field(default_factory=VerifierDefaults)
    montecarlo: MonteCarloDefaults = field(default_factory=MonteCarloDefaults)
    runner: RunnerConfig = field(default_factory=RunnerConfig)

    @property
    def is_production(self) -> bool:
        return self.environment.lower() == "production"

    def validate(self) -> List[str]:
        """
        Validate configuration and return list of warnings/errors.
        Call this on startup to catch misconfigurations early.
        """
        issues = []

        # ── Numerics ──────────────────────────────────────────────────
        if self.numerics.block_size < 1:
            issues.append(f"CRITICAL: LAB_BLOCK_SIZE must be >= 1 (got {self.numerics.block_size})")
        if not (0 < self.numerics.fd_step_relative < 1e-1):
            issues.append(f"CRITICAL: LAB_FD_STEP_RELATIVE {self.numerics.fd_step_relative} outside (0, 0.1)")
        if not (1 <= self.numerics.bruteforce_max_points <= 8):
            issues.append("CRITICAL: LAB_BRUTEFORCE_MAX_POINTS must lie in [1, 8]")
        if not (8 <= self.numerics.weight_grid_bits <= 52):
            issues.append("CRITICAL: LAB_WEIGHT_GRID_BITS must lie in [8, 52]")

        # ── Integrator ────────────────────────────────────────────────
        if self.integrator.scheme not in ("rk4", "heun"):
            issues.append(f"CRITICAL: LAB_SCHEME '{self.integrator.scheme}' is not rk4 or heun")
        if self.integrator.dt_max <= 0:
            issues.append("CRITICAL: LAB_DT_MAX must be positive")
        if not (0 < self.integrator.eta < 1):
            issues.append("CRITICAL: LAB_ETA must lie in (0, 1)")
        if self.integrator.d_floor < 0:
            issues.append("CRITICAL: LAB_D_FLOOR must be >= 0")

        # ── Verifier ──────────────────────────────────────────────────
        if self.verifier.theta_sep < 1:
            issues.append("CRITICAL: LAB_THETA_SEP must be >= 1")
        if self.verifier.theta_small <= 0:
            issues.append("CRITICAL: LAB_THETA_SMALL must be positive")
        if self.verifier.reference_factor < 1:
            issues.append("CRITICAL: LAB_REFERENCE_FACTOR must be >= 1")
        elif self.verifier.reference_factor < 10:
            issues.append("WARNING: LAB_REFERENCE_FACTOR below 10 inflates the reference-cloud floor")

        # ── Monte Carlo ───────────────────────────────────────────────
        if not (0 < self.montecarlo.epsilon < 0.25):
            issues.append("WARNING: LAB_EPSILON outside (0, 1/4)")
        if not (0 < self.montecarlo.confidence < 1):
            issues.append("CRITICAL: LAB_CONFIDENCE must lie in (0, 1)")

        # ── Runner ────────────────────────────────────────────────────
        if self.runner.threads < 1:
            issues.append("CRITICAL: LAB_THREADS must be >= 1")
        if self.is_production and self.debug:
            issues.append("WARNING: DEBUG=True in production!")

        return issues


# =============================================================================
# Singleton Instance
# =============================================================================

@lru_cache(maxsize=1)
def get_config() -> LabConfig:
    """
    Get the singleton configuration instance.
    Uses lru_cache to ensure single instance across the application.
    """
    return LabConfig()


# Convenience alias
config = get_config()
