"""
Shared serializer helpers.

``StrictSerializerMixin`` rejects keys a serializer does not declare, so a
misspelled experiment option fails loudly instead of being ignored.
``validated_or_raise`` turns DRF field errors into a ``ValidationError``
carrying the first offending field.
"""

import math

from rest_framework import serializers

from core.exceptions import ValidationError


class StrictSerializerMixin:
    """Reject unknown keys in the incoming mapping."""

    def to_internal_value(self, data):
        if isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError({key: ["Unknown key."] for key in unknown})
        return super().to_internal_value(data)


class FiniteFloatField(serializers.FloatField):
    """FloatField that rejects nan and +-inf."""

    default_error_messages = {"not_finite": "A finite number is required."}

    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        if not math.isfinite(value):
            self.fail("not_finite")
        return value


def _first_error(errors, prefix: str = "") -> tuple[str, str]:
    if isinstance(errors, dict):
        key, value = next(iter(errors.items()))
        name = key if key != "non_field_errors" else ""
        path = f"{prefix}.{name}" if prefix and name else (name or prefix)
        return _first_error(value, path)
    if isinstance(errors, list) and errors:
        # ListField errors are keyed by index, nested ones by field
        return _first_error(errors[0], prefix)
    return prefix, str(errors)


def validated_or_raise(serializer) -> dict:
    """Run ``is_valid`` and convert failures to ``core.exceptions.ValidationError``."""
    if not serializer.is_valid():
        field, message = _first_error(serializer.errors)
        raise ValidationError(
            f"{field}: {message}" if field else message,
            field=field or None,
            errors=serializer.errors,
        )
    return serializer.validated_data
