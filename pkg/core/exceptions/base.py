"""
Lab Exception Hierarchy
=======================

Domain-specific exceptions for structured error handling across the lab.
Each class maps to a process exit code so the command layer can report
validation problems, numerical aborts and failed acceptance checks
distinctly.

Usage::

    from core.exceptions import ValidationError, SingularConfigurationError

    # In a numerical module:
    raise ValidationError("x has length 3, kernel expects 2", field="x")

    # In the integrator:
    raise SingularConfigurationError("Coincident particles", pair=(4, 17))
"""


# =============================================================================
# Base Exception
# =============================================================================

class LabError(Exception):
    """Base exception for all lab errors."""

    exit_code = 1
    error_code = "lab_error"

    def __init__(self, message="An unexpected error occurred", **kwargs):
        self.message = message
        self.details = kwargs
        super().__init__(message)

    def to_dict(self):
        result = {
            "error": self.error_code,
            "message": self.message,
        }
        if self.details:
            result["detail"] = self.details
        return result


# =============================================================================
# Input Errors
# =============================================================================

class ValidationError(LabError):
    """Invalid argument or experiment spec."""

    exit_code = 2
    error_code = "invalid_argument"

    def __init__(self, message="Invalid argument", field=None, **kwargs):
        if field:
            kwargs["field"] = field
        super().__init__(message, **kwargs)


class ProblemTooLargeError(ValidationError):
    """An exact combinatorial routine was asked for an instance it refuses."""

    error_code = "problem_too_large"

    def __init__(self, message="Instance too large", size=None, limit=None, **kwargs):
        if size is not None:
            kwargs["size"] = size
        if limit is not None:
            kwargs["limit"] = limit
        super().__init__(message, **kwargs)


# =============================================================================
# Configuration Errors
# =============================================================================

class ConfigurationError(LabError):
    """Missing or invalid configuration (env vars, spec files)."""

    exit_code = 2
    error_code = "configuration_error"

    def __init__(self, message="Configuration error", setting=None, **kwargs):
        if setting:
            kwargs["setting"] = setting
        super().__init__(message, **kwargs)


# =============================================================================
# Numerical Aborts
# =============================================================================

class NumericalError(LabError):
    """A computation was aborted for numerical reasons."""

    exit_code = 3
    error_code = "numerical_error"

    def __init__(self, message="Numerical abort", trajectory=None, **kwargs):
        # Partial trajectory up to the failure, when raised during integration
        self.trajectory = trajectory
        super().__init__(message, **kwargs)


class SingularConfigurationError(NumericalError):
    """Coincident particles under a non-mollified singular kernel."""

    error_code = "singular_configuration"

    def __init__(self, message="Coincident particles", pair=None, **kwargs):
        if pair is not None:
            kwargs["pair"] = [int(pair[0]), int(pair[1])]
        super().__init__(message, **kwargs)


class BlowUpError(NumericalError):
    """Minimal distance fell to the configured floor."""

    error_code = "blow_up"

    def __init__(self, message="Particles closer than the distance floor", d_min=None, d_floor=None, **kwargs):
        if d_min is not None:
            kwargs["d_min"] = float(d_min)
        if d_floor is not None:
            kwargs["d_floor"] = float(d_floor)
        super().__init__(message, **kwargs)


# =============================================================================
# Acceptance
# =============================================================================

class AcceptanceError(LabError):
    """A hard acceptance check failed under --strict."""

    exit_code = 4
    error_code = "acceptance_failed"

    def __init__(self, message="Acceptance check failed", checks=None, **kwargs):
        if checks:
            kwargs["checks"] = checks
        super().__init__(message, **kwargs)
