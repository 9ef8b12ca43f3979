"""
Parameter regimes.

Closed-form thresholds under which i.i.d. initial data satisfy the
hypotheses with probability tending to one.
"""

import math

from core.exceptions import ValidationError


def select_delta(n: int, d: int, eps: float) -> float:
    """delta_N = N^(-3/(2d) - eps)."""
    if n < 1:
        raise ValidationError(f"n must be >= 1 (got {n})", field="n")
    if d < 2:
        raise ValidationError(f"d must be >= 2 (got {d})", field="d")
    if not 0 <= eps < 0.25:
        raise ValidationError(f"eps must lie in [0, 1/4) (got {eps})", field="eps")
    return float(n) ** (-1.5 / d - eps)


def alpha_threshold(d: int) -> float:
    """Upper end of the admissible alpha range: min{(2d-3)/3, (d-1)/2}."""
    return min((2 * d - 3) / 3, (d - 1) / 2)


def p_threshold(d: int, alpha: float) -> float:
    """Lower bound d(alpha+1) / (2d - 3(alpha+1)) for p; inf when no p works."""
    denominator = 2 * d - 3 * (alpha + 1)
    if denominator <= 0:
        return math.inf
    return d * (alpha + 1) / denominator


def absorbability_exponent(d: int, alpha: float, p: float, eps: float = 0.0) -> float:
    """
    N-exponent bounding N^-1 rho_N(D_delta)^(1/p) d_min^-alpha:
    (-2p(d - 2 alpha) - d) / (2dp) + alpha eps.
    """
    if math.isinf(p):
        return -(d - 2 * alpha) / d + alpha * eps
    return (-2 * p * (d - 2 * alpha) - d) / (2 * d * p) + alpha * eps


def _format_threshold(value: float) -> str:
    for denominator in (1, 2, 3):
        numerator = value * denominator
        if abs(numerator - round(numerator)) < 1e-12:
            return f"{int(round(numerator))}/{denominator}" if denominator > 1 else str(int(round(numerator)))
    return f"{value:.4g}"


def regime_warnings(d: int, alpha: float, p: float) -> list[str]:
    """
    Warnings when (alpha, p) lie outside the propagation-of-chaos regime.

    These are advisory: the deterministic stability estimate still holds for
    prepared initial data.
    """
    warnings = []
    limit = alpha_threshold(d)
    if not 0 < alpha < limit:
        warnings.append(
            f"alpha={alpha} is outside the i.i.d. regime 0<alpha<{_format_threshold(limit)} if d={d}"
        )
    bound = p_threshold(d, alpha)
    if not p > bound:
        warnings.append(
            f"p={p} must exceed d(alpha+1)/(2d-3(alpha+1)) = {bound:.6g} for i.i.d. data"
        )
    return warnings
