"""
Command Exception Handler
=========================

Converts ``LabError`` subtypes raised inside management commands into
``CommandError`` with the matching process exit code, so ``manage.py``
exits 2 on validation errors, 3 on numerical aborts and 4 on failed
acceptance checks.
"""

import logging

from django.core.management.base import CommandError

from .base import LabError

logger = logging.getLogger(__name__)


def lab_exception_handler(exc: Exception) -> CommandError:
    """
    Map an exception to the ``CommandError`` the command should raise.

    - ``LabError`` subtypes keep their message and exit code.
    - Anything else is logged with traceback and mapped to exit code 1.
    """
    if isinstance(exc, LabError):
        logger.warning(
            "LabError [%s]: %s %s",
            exc.error_code,
            exc.message,
            exc.details or "",
        )
        return CommandError(f"[{exc.error_code}] {exc.message}", returncode=exc.exit_code)

    logger.exception("Unhandled exception in command")
    return CommandError(f"[lab_error] {exc}", returncode=1)
