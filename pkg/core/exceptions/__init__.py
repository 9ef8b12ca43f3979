"""
core.exceptions: Re-exports for convenient imports.

Usage::

    from core.exceptions import ValidationError, BlowUpError

The command handler lives in ``core.exceptions.handlers`` and is imported
separately, so numerical packages stay free of Django imports.
"""

from .base import (
    LabError,
    ValidationError,
    ProblemTooLargeError,
    ConfigurationError,
    NumericalError,
    SingularConfigurationError,
    BlowUpError,
    AcceptanceError,
)

__all__ = [
    # Base
    "LabError",
    # Input
    "ValidationError",
    "ProblemTooLargeError",
    # Config
    "ConfigurationError",
    # Numerical
    "NumericalError",
    "SingularConfigurationError",
    "BlowUpError",
    # Acceptance
    "AcceptanceError",
]
