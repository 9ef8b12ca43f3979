"""
Density Serializers

Validate the ``density`` block of an experiment spec.
"""

import math

from rest_framework import serializers

from core.exceptions import ValidationError as LabValidationError
from core.serializers import FiniteFloatField, StrictSerializerMixin, validated_or_raise

from .models import DensityFamily, DensitySpec


class DensitySpecSerializer(StrictSerializerMixin, serializers.Serializer):
    """Density block: {family, dimension, A, b, amplitude}."""

    family = serializers.ChoiceField(choices=[f.value for f in DensityFamily])
    dimension = serializers.IntegerField(min_value=2, required=False)
    A = serializers.ListField(child=serializers.ListField(child=FiniteFloatField()), required=False)
    b = serializers.ListField(child=FiniteFloatField(), required=False)
    amplitude = FiniteFloatField(required=False, min_value=0.0)

    def validate(self, attrs):
        family = DensityFamily(attrs["family"])
        dimension = attrs.get("dimension", self.context.get("dimension"))
        if family is DensityFamily.AFFINE:
            if "A" not in attrs:
                raise serializers.ValidationError({"A": "Required for affine densities."})
            dimension = len(attrs["A"])
            if any(len(row) != dimension for row in attrs["A"]):
                raise serializers.ValidationError({"A": "Must be a square matrix."})
            attrs.setdefault("b", [0.0] * dimension)
        if dimension is None:
            raise serializers.ValidationError({"dimension": "Required."})
        if family is DensityFamily.SINE_WARP:
            amplitude = attrs.get("amplitude")
            if amplitude is None or not amplitude < 1.0 / (2.0 * math.pi):
                raise serializers.ValidationError({"amplitude": "Sine-warp needs 0 <= amplitude < 1/(2 pi)."})
        try:
            if family is DensityFamily.AFFINE:
                attrs["spec"] = DensitySpec.affine(attrs["A"], attrs["b"])
            elif family is DensityFamily.SINE_WARP:
                attrs["spec"] = DensitySpec.sine_warp(dimension, attrs["amplitude"])
            else:
                attrs["spec"] = DensitySpec.uniform_cube(dimension)
        except LabValidationError as exc:
            raise serializers.ValidationError({exc.details.get("field") or "family": exc.message})
        attrs["dimension"] = dimension
        return attrs

    def create(self, validated_data) -> DensitySpec:
        return validated_data["spec"]


def density_from_dict(data: dict, dimension: int = None) -> DensitySpec:
    """Validate a density mapping and build the ``DensitySpec``."""
    serializer = DensitySpecSerializer(data=data, context={"dimension": dimension})
    validated_or_raise(serializer)
    return serializer.save()
