"""
Kernel Specification
====================

``KernelSpec`` describes an interaction kernel K: R^d -> R^d by family and
parameters. Evaluation lives in ``kernels.services``; this module only
holds the immutable description, its constructors and serialization.

Families:
    power-law      K(x) = x / |x|^(alpha+1)   (repulsive; also rotational,
                   attractive negative control, or a custom callable)
    oseen-gravity  K(x) = Phi(x) g, Phi the Stokes fundamental tensor, d = 3
    mollified      base kernel with a linear radial taper inside |x| < eps
    scaled         c * base kernel
    zero           K = 0
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import math

from core.exceptions import ValidationError


class KernelFamily(str, Enum):
    """Kernel families understood by the evaluator."""
    POWER_LAW = "power-law"
    OSEEN_GRAVITY = "oseen-gravity"
    MOLLIFIED = "mollified"
    SCALED = "scaled"
    ZERO = "zero"


class Orientation(str, Enum):
    """Direction field of a power-law kernel."""
    REPULSIVE = "repulsive"      # x / |x|^(alpha+1)
    ROTATIONAL = "rotational"    # x^perp / |x|^(alpha+1), d = 2
    ATTRACTIVE = "attractive"    # -x / |x|^(alpha+1), negative control only
    CUSTOM = "custom"            # user callable, assumed antisymmetric


@dataclass(frozen=True)
class KernelSpec:
    """
    Immutable kernel description.

    ``alpha`` is the singularity exponent (oseen-gravity: 1, zero: 0;
    mollified and scaled kernels inherit it from their base).
    ``c_k_hint`` is the analytic constant of the growth bound
    |K(x)| + |x||grad K(x)| <= C_K |x|^-alpha when known, else None.
    """

    family: KernelFamily
    dimension: int
    alpha: float = 0.0
    c_k_hint: Optional[float] = None
    orientation: Orientation = Orientation.REPULSIVE
    g: Optional[tuple] = None
    base: Optional["KernelSpec"] = None
    epsilon: Optional[float] = None
    factor: Optional[float] = None
    profile: Optional[Callable] = None

    def __post_init__(self):
        if self.dimension < 2:
            raise ValidationError(f"Kernel dimension must be >= 2 (got {self.dimension})", field="dimension")
        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise ValidationError(f"alpha must be finite and >= 0 (got {self.alpha})", field="alpha")
        if self.c_k_hint is None:
            object.__setattr__(self, "c_k_hint", self._analytic_c_k())

    # ── Constructors ──────────────────────────────────────────────────

    @classmethod
    def power_law(cls, alpha: float, dimension: int, orientation: Orientation = Orientation.REPULSIVE) -> "KernelSpec":
        orientation = Orientation(orientation)
        if orientation is Orientation.CUSTOM:
            raise ValidationError("Use KernelSpec.custom() for callable kernels", field="orientation")
        if orientation is Orientation.ROTATIONAL and dimension != 2:
            raise ValidationError("Rotational power-law kernels require d = 2", field="orientation")
        return cls(KernelFamily.POWER_LAW, int(dimension), alpha=float(alpha), orientation=orientation)

    @classmethod
    def oseen_gravity(cls, g=(0.0, 0.0, -1.0)) -> "KernelSpec":
        g = tuple(float(v) for v in g)
        if len(g) != 3:
            raise ValidationError("Oseen gravity vector must have 3 components", field="g")
        return cls(KernelFamily.OSEEN_GRAVITY, 3, alpha=1.0, g=g)

    @classmethod
    def zero(cls, dimension: int) -> "KernelSpec":
        return cls(KernelFamily.ZERO, int(dimension), alpha=0.0)

    @classmethod
    def custom(cls, profile: Callable, alpha: float, dimension: int, c_k_hint: Optional[float] = None) -> "KernelSpec":
        """Antisymmetric kernel given by ``profile(x) -> K(x)`` on arrays of shape (..., d)."""
        return cls(
            KernelFamily.POWER_LAW, int(dimension), alpha=float(alpha),
            c_k_hint=c_k_hint, orientation=Orientation.CUSTOM, profile=profile,
        )

    # ── Properties ────────────────────────────────────────────────────

    @property
    def is_singular(self) -> bool:
        """True when K blows up at the origin."""
        if self.family in (KernelFamily.POWER_LAW, KernelFamily.OSEEN_GRAVITY):
            return self.alpha > 0
        if self.family is KernelFamily.SCALED:
            return self.base.is_singular
        return False

    @property
    def is_antisymmetric(self) -> bool:
        """K(-x) = -K(x)."""
        if self.family is KernelFamily.OSEEN_GRAVITY:
            return False
        if self.family in (KernelFamily.MOLLIFIED, KernelFamily.SCALED):
            return self.base.is_antisymmetric
        return True

    @property
    def is_admissible(self) -> bool:
        """Singularity exponent inside the open range (0, d-1)."""
        return 0 < self.alpha < self.dimension - 1

    def _analytic_c_k(self) -> Optional[float]:
        if self.family is KernelFamily.ZERO:
            return 0.0
        if self.family is KernelFamily.POWER_LAW and self.orientation is not Orientation.CUSTOM:
            # |K| = r^-alpha, spectral norm of grad K = max(1, alpha) r^-(alpha+1)
            return 1.0 + max(1.0, self.alpha)
        if self.family is KernelFamily.MOLLIFIED and self.base is not None:
            # inside the taper K_eps(x) = r eps^-(alpha+1) K(x/r): same constant
            return self.base.c_k_hint
        if self.family is KernelFamily.SCALED and self.base is not None and self.base.c_k_hint is not None:
            return abs(self.factor) * self.base.c_k_hint
        return None

    # ── Serialization ─────────────────────────────────────────────────

    def to_dict(self) -> dict:
        """Plain-dict form used by the experiment config and trajectory headers."""
        if self.orientation is Orientation.CUSTOM:
            raise ValidationError("Custom callable kernels cannot be serialized", field="orientation")
        result = {
            "family": self.family.value,
            "dimension": self.dimension,
            "alpha": self.alpha,
        }
        if self.family is KernelFamily.POWER_LAW:
            result["orientation"] = self.orientation.value
        if self.g is not None:
            result["g"] = list(self.g)
        if self.epsilon is not None:
            result["epsilon"] = self.epsilon
        if self.factor is not None:
            result["c"] = self.factor
        if self.base is not None:
            result["base"] = self.base.to_dict()
        return result

    @classmethod
    def from_dict(cls, data: dict) -> "KernelSpec":
        """
        Inverse of ``to_dict``. Does not re-check the admissible alpha
        range; use ``kernels.serializers`` for user input.
        """
        family = KernelFamily(data["family"])
        base = cls.from_dict(data["base"]) if "base" in data else None
        return cls(
            family,
            int(data["dimension"]),
            alpha=float(data.get("alpha", 0.0)),
            orientation=Orientation(data.get("orientation", Orientation.REPULSIVE.value)),
            g=tuple(float(v) for v in data["g"]) if "g" in data else None,
            base=base,
            epsilon=data.get("epsilon"),
            factor=data.get("c"),
        )
