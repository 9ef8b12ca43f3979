"""
Experiment Spec Serializers

Validate an experiment spec document and build an ``ExperimentSpec``.
Unknown keys are rejected at every level; nested ``kernel`` and
``density`` blocks are handed to their own serializers.
"""

import math

from rest_framework import serializers

from core.exceptions import ValidationError
from core.serializers import FiniteFloatField, StrictSerializerMixin, validated_or_raise
from dynamics import IntegratorControls
from dynamics.models import SCHEMES
from kernels.serializers import KernelSpecSerializer
from montecarlo.serializers import DensitySpecSerializer
from montecarlo.services import ESTIMATOR_REGISTRY
from verifier import AssumptionThresholds

from .models import MC_STUDIES, ExperimentSpec, Mode

# Keys every mode needs on top of ``mode``
MODE_REQUIRED = {
    Mode.SIMULATE: ("kernel", "n", "T"),
    Mode.VERIFY: ("kernel", "density", "n", "T", "p"),
    Mode.MC_LEMMA: ("density", "n_list", "replicas", "which"),
    Mode.ASSUMPTIONS_PROB: ("kernel", "density", "n_list", "replicas", "p"),
    Mode.CONVERGENCE_STUDY: ("kernel", "density", "n_list", "T", "p"),
}

# Optional params of the trajectory modes
MODE_PARAMS = {
    Mode.SIMULATE: (),
    Mode.VERIFY: ("l1", "blob_epsilon"),
    Mode.ASSUMPTIONS_PROB: (),
    Mode.CONVERGENCE_STUDY: ("l1", "blob_epsilon"),
}

# Extra parameters of the mc-lemma studies that are not registry entries
STUDY_PARAMS = {
    "wasserstein-scaling": (),
    "cutoff-bound": ("beta",),
}
STUDY_OPTIONAL = {
    "wasserstein-scaling": (),
    "cutoff-bound": ("delta_fraction", "ratio_limit"),
}


class ExponentField(serializers.Field):
    """Transport exponent: a number >= 1 or the string "inf"."""

    default_error_messages = {
        "invalid": 'Must be a number >= 1 or "inf".',
    }

    def to_internal_value(self, data):
        if isinstance(data, str) and data.strip().lower() in ("inf", "infinity"):
            return math.inf
        if isinstance(data, bool):
            self.fail("invalid")
        try:
            value = float(data)
        except (TypeError, ValueError):
            self.fail("invalid")
        if math.isnan(value) or value < 1:
            self.fail("invalid")
        return value

    def to_representation(self, value):
        return "inf" if math.isinf(value) else value


class ThresholdsSerializer(StrictSerializerMixin, serializers.Serializer):
    theta_sep = FiniteFloatField(required=False, min_value=1.0)
    theta_small = FiniteFloatField(required=False, min_value=0.0, max_value=1.0)
    conv_cutoff = FiniteFloatField(required=False, min_value=0.0)
    wp_cutoff = FiniteFloatField(required=False, min_value=0.0)


class ControlsSerializer(StrictSerializerMixin, serializers.Serializer):
    scheme = serializers.ChoiceField(choices=list(SCHEMES), required=False)
    dt_max = FiniteFloatField(required=False, min_value=0.0)
    eta = FiniteFloatField(required=False, min_value=0.0, max_value=1.0)
    d_floor = FiniteFloatField(required=False, min_value=0.0)
    record_every = FiniteFloatField(required=False, min_value=0.0)
    diagnostic_delta = FiniteFloatField(required=False, min_value=0.0)


class ExperimentSpecSerializer(StrictSerializerMixin, serializers.Serializer):
    """
    Top-level spec document.

    ``n`` and ``n_list`` are interchangeable: single-N modes read the first
    entry, study modes read the whole list.
    """

    mode = serializers.ChoiceField(choices=[m.value for m in Mode])
    kernel = serializers.DictField(required=False)
    density = serializers.DictField(required=False)
    positions = serializers.ListField(
        child=serializers.ListField(child=FiniteFloatField(), min_length=2),
        min_length=2,
        required=False,
    )
    n = serializers.IntegerField(min_value=2, required=False)
    n_list = serializers.ListField(child=serializers.IntegerField(min_value=2), min_length=1, required=False)
    T = FiniteFloatField(required=False)
    p = ExponentField(required=False)
    eps = FiniteFloatField(required=False, min_value=0.0)
    delta_n = FiniteFloatField(required=False)
    thresholds = ThresholdsSerializer(required=False)
    controls = ControlsSerializer(required=False)
    replicas = serializers.IntegerField(min_value=1, required=False)
    reference_factor = serializers.IntegerField(min_value=1, required=False)
    seed = serializers.IntegerField(min_value=0, default=0)
    which = serializers.CharField(required=False)
    params = serializers.DictField(child=FiniteFloatField(), required=False)
    save_plans = serializers.BooleanField(default=False)
    output = serializers.CharField(required=False)

    def validate_eps(self, value):
        if not value < 0.25:
            raise serializers.ValidationError("Must satisfy 0 <= eps < 0.25.")
        return value

    def validate(self, attrs):
        mode = Mode(attrs["mode"])

        # n_list is the canonical form
        if "n" in attrs and "n_list" in attrs:
            raise serializers.ValidationError({"n": "Give either n or n_list, not both."})
        if "n" in attrs:
            attrs["n_list"] = [attrs.pop("n")]
        if "positions" in attrs:
            if "n_list" in attrs and attrs["n_list"] != [len(attrs["positions"])]:
                raise serializers.ValidationError({"positions": "Number of rows does not match n."})
            attrs["n_list"] = [len(attrs["positions"])]
            if len({len(row) for row in attrs["positions"]}) != 1:
                raise serializers.ValidationError({"positions": "Every row needs the same dimension."})

        missing = [key for key in MODE_REQUIRED[mode] if key not in attrs and not (key == "n" and "n_list" in attrs)]
        if mode is Mode.SIMULATE and "density" not in attrs and "positions" not in attrs:
            missing.append("density")
        if missing:
            raise serializers.ValidationError({key: f"Required for mode '{mode.value}'." for key in missing})

        if mode in (Mode.SIMULATE, Mode.VERIFY) and len(attrs["n_list"]) != 1:
            raise serializers.ValidationError({"n_list": f"Mode '{mode.value}' runs a single N."})
        if "T" in attrs and not attrs["T"] > 0:
            raise serializers.ValidationError({"T": "Must be > 0."})
        if "delta_n" in attrs and not attrs["delta_n"] > 0:
            raise serializers.ValidationError({"delta_n": "Must be > 0."})

        dimension = self._build_nested(attrs)
        attrs["dimension"] = dimension

        if mode is Mode.MC_LEMMA:
            self._validate_which(attrs)
        else:
            params = attrs.get("params", {})
            unknown = sorted(set(params) - set(MODE_PARAMS[mode]))
            if unknown:
                raise serializers.ValidationError({"params": f"Unknown parameters {unknown} for mode '{mode.value}'."})
            if params.get("blob_epsilon", 1.0) <= 0 or params.get("l1", 0.0) < 0:
                raise serializers.ValidationError({"params": "blob_epsilon must be > 0 and l1 >= 0."})
        return attrs

    def _build_nested(self, attrs) -> int:
        """Build kernel and density and return the common dimension."""
        dimension = None
        if "positions" in attrs:
            dimension = len(attrs["positions"][0])
        if "kernel" in attrs:
            hint = dimension if dimension is not None else attrs.get("density", {}).get("dimension")
            kernel_serializer = KernelSpecSerializer(data=attrs["kernel"], context={"dimension": hint})
            if not kernel_serializer.is_valid():
                raise serializers.ValidationError({"kernel": kernel_serializer.errors})
            attrs["kernel"] = kernel_serializer.save()
            if dimension is not None and attrs["kernel"].dimension != dimension:
                raise serializers.ValidationError({"kernel": "Kernel dimension does not match the positions."})
            dimension = attrs["kernel"].dimension
        if "density" in attrs:
            density_serializer = DensitySpecSerializer(data=attrs["density"], context={"dimension": dimension})
            if not density_serializer.is_valid():
                raise serializers.ValidationError({"density": density_serializer.errors})
            attrs["density"] = density_serializer.save()
            if dimension is not None and attrs["density"].dimension != dimension:
                raise serializers.ValidationError({
                    "density": f"Density dimension {attrs['density'].dimension} does not match d = {dimension}."
                })
            dimension = attrs["density"].dimension
        return dimension

    def _validate_which(self, attrs) -> None:
        which = attrs["which"]
        params = attrs.setdefault("params", {})
        if which in ESTIMATOR_REGISTRY:
            required, optional = ESTIMATOR_REGISTRY[which].params, ()
        elif which in MC_STUDIES:
            required, optional = STUDY_PARAMS[which], STUDY_OPTIONAL[which]
            if "p" not in attrs:
                raise serializers.ValidationError({"p": f"Required for '{which}'."})
        else:
            choices = sorted([*ESTIMATOR_REGISTRY, *MC_STUDIES])
            raise serializers.ValidationError({"which": f"Unknown estimator '{which}'; choose one of {choices}."})
        missing = [name for name in required if name not in params]
        if missing:
            raise serializers.ValidationError({"params": f"'{which}' needs {missing}."})
        unknown = sorted(set(params) - set(required) - set(optional))
        if unknown:
            raise serializers.ValidationError({"params": f"Unknown parameters {unknown} for '{which}'."})

    def create(self, validated_data) -> ExperimentSpec:
        controls = validated_data.get("controls")
        thresholds = validated_data.get("thresholds")
        return ExperimentSpec(
            mode=Mode(validated_data["mode"]),
            dimension=validated_data["dimension"],
            seed=validated_data["seed"],
            kernel=validated_data.get("kernel"),
            density=validated_data.get("density"),
            positions=validated_data.get("positions"),
            n_list=list(validated_data["n_list"]),
            T=validated_data.get("T"),
            p=validated_data.get("p"),
            eps=validated_data.get("eps"),
            delta_n=validated_data.get("delta_n"),
            thresholds=AssumptionThresholds.from_defaults(**thresholds) if thresholds is not None else None,
            controls=IntegratorControls.from_defaults(**controls) if controls is not None else None,
            replicas=validated_data.get("replicas"),
            reference_factor=validated_data.get("reference_factor"),
            which=validated_data.get("which"),
            params=dict(validated_data.get("params", {})),
            save_plans=validated_data["save_plans"],
            output=validated_data.get("output"),
            raw=dict(self.initial_data),
        )


def spec_from_dict(data: dict) -> ExperimentSpec:
    """Validate a spec mapping and build the ``ExperimentSpec``."""
    if not isinstance(data, dict):
        raise ValidationError("The spec must be a JSON object", field="spec")
    serializer = ExperimentSpecSerializer(data=data)
    validated_or_raise(serializer)
    return serializer.save()
