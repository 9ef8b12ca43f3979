"""
Verifier Models

Report types for the hypothesis, conclusion and bootstrap checks.
"""

import math
from dataclasses import asdict, dataclass, field

from core.exceptions import ValidationError
from meanfield.config import config


@dataclass(frozen=True)
class AssumptionThresholds:
    """
    Finite-N cutoffs for the asymptotic conditions.

    theta_sep    separation factor: d_ik >= theta_sep * delta_N
    theta_small  bound for N^-1 d_ij^-1 d_ik^-alpha
    conv_cutoff  bound for W_p(0) N^(1/d) / log N
    wp_cutoff    bound for the W_p-condition statistic
    """

    theta_sep: float = 4.0
    theta_small: float = 0.25
    conv_cutoff: float = 1.0
    wp_cutoff: float = 1.0

    def __post_init__(self):
        if not self.theta_sep >= 1:
            raise ValidationError("theta_sep must be >= 1", field="theta_sep")
        if not 0 < self.theta_small <= 1:
            raise ValidationError("theta_small must lie in (0, 1]", field="theta_small")
        if not self.conv_cutoff > 0:
            raise ValidationError("conv_cutoff must be > 0", field="conv_cutoff")
        if not self.wp_cutoff > 0:
            raise ValidationError("wp_cutoff must be > 0", field="wp_cutoff")

    @classmethod
    def from_defaults(cls, **overrides) -> "AssumptionThresholds":
        defaults = config.verifier
        values = {
            "theta_sep": defaults.theta_sep,
            "theta_small": defaults.theta_small,
            "conv_cutoff": defaults.conv_cutoff,
            "wp_cutoff": defaults.wp_cutoff,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ConditionResult:
    """One checked condition: pass flag, the statistic and what it was compared with."""
    passed: bool
    value: float
    limit: float
    checked: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class AssumptionReport:
    """
    Hypotheses of the deterministic convergence estimate evaluated on one
    initial configuration.

    ``strong1.value`` is the worst separation ratio (inf when no pair
    qualifies); ``strong2.value`` the worst smallness statistic (0 when no
    pair qualifies).
    """

    n: int
    dim: int
    alpha: float
    p: float
    delta_n: float
    d_min: float
    d_min1: float
    close_mass: float
    w_p0: float
    w_estimator: str
    w_floor: float
    delta_ok: bool
    cond_conv: ConditionResult
    cond_wp: ConditionResult
    cond_strong1: ConditionResult
    cond_strong2: ConditionResult
    cond_absorbable: ConditionResult
    absorb_exponent: float
    absorb_exponent_ok: bool
    thresholds: AssumptionThresholds

    CONDITIONS = ("delta", "conv", "wp", "strong1", "strong2", "absorbable")

    def conditions(self) -> dict:
        return {
            "delta": self.delta_ok,
            "conv": self.cond_conv.passed,
            "wp": self.cond_wp.passed,
            "strong1": self.cond_strong1.passed,
            "strong2": self.cond_strong2.passed,
            "absorbable": self.cond_absorbable.passed,
        }

    @property
    def all_passed(self) -> bool:
        return all(self.conditions().values())

    def to_dict(self) -> dict:
        result = {
            key: value for key, value in asdict(self).items()
            if not key.startswith("cond_") and key != "thresholds"
        }
        for name in ("conv", "wp", "strong1", "strong2", "absorbable"):
            result[f"cond_{name}"] = getattr(self, f"cond_{name}").to_dict()
        result["thresholds"] = self.thresholds.to_dict()
        result["conditions"] = self.conditions()
        result["all_passed"] = self.all_passed
        return result


@dataclass
class ConclusionReport:
    """
    Fitted constants of the conclusions on one (micro, reference) pair.

    ``margins[k]`` = W_p(t_k) / ((W_p(0) + penalty) e^(C t_k)) with the
    fitted C; the bound holds at every sample with prefactor
    ``prefactor_envelope``.
    """

    p: float
    delta_n: float
    sample_times: list
    w_series: list
    fitted_c_dist: float
    fitted_c_wp: float
    fitted_c_wp_stderr: float
    prefactor: float
    prefactor_envelope: float
    penalty: float
    margins: list
    w_estimator: str
    w_floor: float

    @property
    def sup_margin(self) -> float:
        return max(self.margins) if self.margins else math.nan

    def rows(self) -> list[tuple]:
        return list(zip(self.sample_times, self.w_series, self.margins))

    def to_dict(self) -> dict:
        result = asdict(self)
        result["sup_margin"] = self.sup_margin
        return result


@dataclass
class BootstrapSeries:
    """
    Per-sample bootstrap diagnostics.

    delta(t) = delta_N e^(-2 L1 t) / 2. ``flags[k]`` is set when
    d_min,1(t_k) < delta(t_k); ``pair_flags[k]`` when some pair violates
    d_ij(t) >= e^(-2 L1 t) d_ij(0) / 2.
    """

    delta_n: float
    l1: float
    alpha: float
    times: list = field(default_factory=list)
    delta: list = field(default_factory=list)
    s_over_n: list = field(default_factory=list)
    d_min1: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    pair_ratio: list = field(default_factory=list)
    pair_flags: list = field(default_factory=list)

    CSV_HEADER = ("t", "delta", "S_over_N", "d_min1", "flag", "pair_ratio", "pair_flag")

    @property
    def implied_l2(self) -> float:
        """Smallest L2 with S_(alpha+1, delta(t)) <= N L2 at every sample."""
        return max(self.s_over_n) if self.s_over_n else 0.0

    @property
    def any_flag(self) -> bool:
        return any(self.flags) or any(self.pair_flags)

    def rows(self) -> list[tuple]:
        return list(zip(self.times, self.delta, self.s_over_n, self.d_min1,
                        self.flags, self.pair_ratio, self.pair_flags))

    def to_dict(self) -> dict:
        result = asdict(self)
        result["implied_l2"] = self.implied_l2
        return result


@dataclass
class CutoffSumBound:
    """(1/N) S_(beta, delta) against the explicit upper bound in W_p."""
    lhs: float
    rhs: float
    ratio: float
    beta: float
    delta: float
    p: float
    m_count: int
    w_p: float
    rho_inf: float

    def to_dict(self) -> dict:
        return asdict(self)
