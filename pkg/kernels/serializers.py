"""
Kernel Serializers

Validate the ``kernel`` block of an experiment spec and build the
corresponding ``KernelSpec``. Attractive and custom orientations are
test-only and are not accepted here.
"""

from rest_framework import serializers

from core.serializers import FiniteFloatField, StrictSerializerMixin, validated_or_raise

from .services import mollify, scale
from .spec import KernelFamily, KernelSpec, Orientation


class KernelSpecSerializer(StrictSerializerMixin, serializers.Serializer):
    """Kernel block: {family, alpha, g, epsilon, c, orientation, dimension, base}."""

    family = serializers.ChoiceField(choices=[f.value for f in KernelFamily])
    dimension = serializers.IntegerField(min_value=2, required=False)
    alpha = FiniteFloatField(required=False)
    orientation = serializers.ChoiceField(
        choices=[Orientation.REPULSIVE.value, Orientation.ROTATIONAL.value],
        default=Orientation.REPULSIVE.value,
    )
    g = serializers.ListField(child=FiniteFloatField(), min_length=3, max_length=3, required=False)
    epsilon = FiniteFloatField(required=False, min_value=0.0)
    c = FiniteFloatField(required=False)
    base = serializers.DictField(required=False)

    def validate(self, attrs):
        family = KernelFamily(attrs["family"])
        default_dimension = self.context.get("dimension")

        if family is KernelFamily.POWER_LAW:
            if "alpha" not in attrs:
                raise serializers.ValidationError({"alpha": "Required for power-law kernels."})
            dimension = attrs.get("dimension", default_dimension)
            if dimension is None:
                raise serializers.ValidationError({"dimension": "Required for power-law kernels."})
            alpha = attrs["alpha"]
            if not 0 < alpha < dimension - 1:
                raise serializers.ValidationError({
                    "alpha": (
                        f"alpha={alpha} violates the kernel growth condition (C_alpha): "
                        f"need 0 < alpha < d-1 = {dimension - 1}."
                    )
                })
            if attrs["orientation"] == Orientation.ROTATIONAL.value and dimension != 2:
                raise serializers.ValidationError({"orientation": "Rotational kernels require d = 2."})
            attrs["dimension"] = dimension

        elif family is KernelFamily.OSEEN_GRAVITY:
            if attrs.get("dimension", 3) != 3 or (default_dimension not in (None, 3)):
                raise serializers.ValidationError({"dimension": "oseen-gravity requires d = 3."})
            attrs["dimension"] = 3

        elif family is KernelFamily.ZERO:
            dimension = attrs.get("dimension", default_dimension)
            if dimension is None:
                raise serializers.ValidationError({"dimension": "Required for zero kernels."})
            attrs["dimension"] = dimension

        else:
            if "base" not in attrs:
                raise serializers.ValidationError({"base": f"Required for {family.value} kernels."})
            if family is KernelFamily.MOLLIFIED and not attrs.get("epsilon"):
                raise serializers.ValidationError({"epsilon": "Must be > 0 for mollified kernels."})
            if family is KernelFamily.SCALED and "c" not in attrs:
                raise serializers.ValidationError({"c": "Required for scaled kernels."})
            nested = KernelSpecSerializer(data=attrs["base"], context=self.context)
            if not nested.is_valid():
                raise serializers.ValidationError({"base": nested.errors})
            attrs["base"] = nested.save()
            attrs["dimension"] = attrs["base"].dimension
        return attrs

    def create(self, validated_data) -> KernelSpec:
        family = KernelFamily(validated_data["family"])
        if family is KernelFamily.POWER_LAW:
            return KernelSpec.power_law(
                validated_data["alpha"], validated_data["dimension"], validated_data["orientation"],
            )
        if family is KernelFamily.OSEEN_GRAVITY:
            return KernelSpec.oseen_gravity(validated_data.get("g", (0.0, 0.0, -1.0)))
        if family is KernelFamily.ZERO:
            return KernelSpec.zero(validated_data["dimension"])
        if family is KernelFamily.MOLLIFIED:
            return mollify(validated_data["base"], validated_data["epsilon"])
        return scale(validated_data["base"], validated_data["c"])


def kernel_from_dict(data: dict, dimension: int = None) -> KernelSpec:
    """Validate a kernel mapping and build the ``KernelSpec``."""
    serializer = KernelSpecSerializer(data=data, context={"dimension": dimension})
    validated_or_raise(serializer)
    return serializer.save()
