"""
Startup checks for the lab configuration.

``CoreConfig.ready()`` calls ``validate_config_on_startup`` once per process.
Issues come back as strings prefixed with their severity; in production a
CRITICAL issue stops the process before any experiment runs.
"""

import logging
import os
from pathlib import Path

from django.core.exceptions import ImproperlyConfigured

logger = logging.getLogger(__name__)

_LEVELS = {
    "CRITICAL": logging.CRITICAL,
    "WARNING": logging.WARNING,
    "INFO": logging.INFO,
}


def output_dir_issues(output_dir: str) -> list[str]:
    """Problems with the default artifact directory, checked without creating it."""
    path = Path(output_dir)
    if path.exists():
        if not path.is_dir():
            return [f"CRITICAL: LAB_OUTPUT_DIR '{output_dir}' exists and is not a directory"]
        if not os.access(path, os.W_OK):
            return [f"WARNING: LAB_OUTPUT_DIR '{output_dir}' is not writable"]
        return []
    return [f"INFO: LAB_OUTPUT_DIR '{output_dir}' will be created on first run"]


def validate_config_on_startup():
    """
    Log every configuration issue at its severity.

    Runs started without ``--out`` write below ``LAB_OUTPUT_DIR``, so its
    state is checked together with the numerical settings.
    """
    from meanfield.config import config

    issues = config.validate() + output_dir_issues(config.runner.output_dir)
    for issue in issues:
        severity = issue.split(":", 1)[0]
        logger.log(_LEVELS.get(severity, logging.INFO), issue)

    critical = [issue for issue in issues if issue.startswith("CRITICAL")]
    if critical and config.is_production:
        raise ImproperlyConfigured(
            "Refusing to start with a broken production configuration:\n"
            + "\n".join(f"  - {issue}" for issue in critical)
        )
    logger.debug("Configuration checked: %d issue(s), %d critical", len(issues), len(critical))
