"""
Acceptance Checks
=================

Property checks evaluated on the outputs of a run. Hard checks fail a
``--strict`` run with exit code 4; soft checks are only reported.

The asymptotic statements behind these runs carry unspecified constants,
so the checks are trend and stability properties at the N values run:

    simulate           closed-form pair separation, centre-of-mass drift
    verify             finite fitted rate, sup margin of the fitted bound
    mc-lemma           N-uniform tails, scaled-median band, bound domination
    dmin-tail pairs    L^-d ratio between two saved runs (report --compare)
    assumptions-prob   satisfaction fraction nondecreasing in N
    convergence-study  fitted-rate stability, margins, shrinking sup distance
"""

import logging
import math
from typing import Iterable, Optional

import numpy as np

from core.exceptions import AcceptanceError, ValidationError
from dynamics import Trajectory, two_body_exact
from kernels import KernelFamily, Orientation
from montecarlo import MCReport
from verifier import BootstrapSeries, ConclusionReport

from ..models import AcceptanceCheck

logger = logging.getLogger(__name__)

TWO_BODY_RTOL = 1e-6
COM_DRIFT_PER_PARTICLE = 1e-9
MARGIN_LIMIT = 1.5
RATE_STABILITY = 2.0
SCALED_MEDIAN_BAND = 4.0
TAIL_RATIO_BAND = 2.0


def _spread(values: Iterable[float]) -> float:
    """max / min of nonnegative values; 1 when all are zero."""
    values = [float(v) for v in values]
    if not values:
        return math.nan
    low, high = min(values), max(values)
    if high == 0:
        return 1.0
    return high / low if low > 0 else math.inf


# ─── simulate ───────────────────────────────────────────────────────

def simulate_checks(trajectory: Trajectory) -> list[AcceptanceCheck]:
    checks = []
    kernel = trajectory.kernel
    if (
        trajectory.n == 2
        and kernel.family is KernelFamily.POWER_LAW
        and kernel.orientation is Orientation.REPULSIVE
    ):
        initial, final = trajectory.initial.positions, trajectory.final.positions
        r0 = float(np.linalg.norm(initial[0] - initial[1]))
        r_t = float(np.linalg.norm(final[0] - final[1]))
        exact = two_body_exact(r0, kernel.alpha, 2, trajectory.sample_times[-1])
        error = abs(r_t - exact) / exact
        checks.append(AcceptanceCheck(
            "two_body_closed_form", error <= TWO_BODY_RTOL, error, TWO_BODY_RTOL,
            detail=f"|r(T)| = {r_t!r}, closed form {exact!r}",
        ))

    if kernel.is_antisymmetric:
        com = trajectory.center_of_mass() * trajectory.n
        drift = float(np.max(np.linalg.norm(com - com[0], axis=1)))
        limit = COM_DRIFT_PER_PARTICLE * trajectory.n
        checks.append(AcceptanceCheck("center_of_mass_drift", drift <= limit, drift, limit))
    return checks


# ─── verify / convergence-study ─────────────────────────────────────

def verify_checks(conclusions: ConclusionReport, bootstrap: Optional[BootstrapSeries] = None,
                  all_assumptions_passed: Optional[bool] = None) -> list[AcceptanceCheck]:
    rate = conclusions.fitted_c_dist
    checks = [
        AcceptanceCheck("fitted_c_dist_finite", math.isfinite(rate), rate),
        AcceptanceCheck(
            "sup_margin", conclusions.sup_margin <= MARGIN_LIMIT, conclusions.sup_margin, MARGIN_LIMIT,
            detail="sup_t W_p(t) / ((W_p(0) + penalty) e^(C t))",
        ),
    ]
    if bootstrap is not None:
        checks.append(AcceptanceCheck(
            "bootstrap_unflagged", not bootstrap.any_flag, float(sum(bootstrap.flags) + sum(bootstrap.pair_flags)),
            0.0, hard=False,
        ))
    if all_assumptions_passed is not None:
        checks.append(AcceptanceCheck("assumptions_met", all_assumptions_passed, hard=False))
    return checks


def convergence_checks(rows: list[dict]) -> list[AcceptanceCheck]:
    """
    ``rows`` holds one dict per N (ascending) with fitted_c_dist,
    sup_margin, sup_w and w_floor.
    """
    rates = [row["fitted_c_dist"] for row in rows]
    finite = all(math.isfinite(r) for r in rates)
    spread = _spread(rates) if finite else math.inf
    checks = [
        AcceptanceCheck("fitted_c_dist_finite", finite),
        AcceptanceCheck("fitted_c_dist_stable", spread <= RATE_STABILITY, spread, RATE_STABILITY),
    ]
    worst = max(row["sup_margin"] for row in rows)
    checks.append(AcceptanceCheck("sup_margin", worst <= MARGIN_LIMIT, worst, MARGIN_LIMIT))

    # beyond the discretization floor of the finer reference cloud
    shrinking = all(
        later["sup_w"] <= earlier["sup_w"] + later["w_floor"]
        for earlier, later in zip(rows, rows[1:])
    )
    checks.append(AcceptanceCheck(
        "sup_distance_nonincreasing", shrinking,
        detail=", ".join(f"N={row['n']}: {row['sup_w']:.4g}" for row in rows),
    ))
    return checks


# ─── Monte Carlo ────────────────────────────────────────────────────

def _uniform_in_n(report: MCReport, hard: bool) -> AcceptanceCheck:
    estimates = [point.estimate for point in report.points]
    agree = all(a.overlaps(b) for k, a in enumerate(estimates) for b in estimates[k + 1:])
    return AcceptanceCheck(
        "estimates_agree_across_n", agree, hard=hard,
        detail="; ".join(f"N={p.n}: [{p.estimate.lower:.3g}, {p.estimate.upper:.3g}]" for p in report.points),
    )


def tail_ratio_checks(report: dict, reference: dict) -> list[AcceptanceCheck]:
    """
    Compare two saved dmin-tail reports that differ in L.

    In the small-probability regime P(d_min <= L^-1 N^(-2/d)) scales like
    L^-d, so at every N both runs share, estimate(larger L) / estimate(smaller L)
    must lie within a factor TAIL_RATIO_BAND of (L_small / L_large)^d.
    """
    for name, payload in (("report", report), ("reference", reference)):
        if payload.get("estimator") != "dmin-tail":
            raise ValidationError(
                f"The {name} run is not a dmin-tail run (got {payload.get('estimator')!r})", field="compare",
            )
    d = report["parameters"]["d"]
    if reference["parameters"]["d"] != d:
        raise ValidationError("The two runs sample different dimensions", field="compare")
    small, large = sorted((report, reference), key=lambda payload: payload["parameters"]["L"])
    l_small, l_large = small["parameters"]["L"], large["parameters"]["L"]
    if l_small == l_large:
        raise ValidationError(f"Both runs use L = {l_small}", field="compare")

    by_n = {point["n"]: point["estimate"] for point in small["points"]}
    common = [(point["n"], by_n[point["n"]], point["estimate"]) for point in large["points"] if point["n"] in by_n]
    if not common:
        raise ValidationError("The two runs share no N", field="compare")

    target = (l_small / l_large) ** d
    low, high = target / TAIL_RATIO_BAND, target * TAIL_RATIO_BAND
    checks = []
    for n, base, scaled in common:
        ratio = scaled["estimate"] / base["estimate"] if base["estimate"] > 0 else math.nan
        checks.append(AcceptanceCheck(
            f"dmin_tail_ratio_n{n}", low <= ratio <= high, ratio, target,
            detail=f"L={l_large!r} vs L={l_small!r}: {scaled['successes']}/{base['successes']} events, "
                   f"band [{low:.4g}, {high:.4g}]",
        ))
    return checks


def mc_checks(report: MCReport) -> list[AcceptanceCheck]:
    estimator = report.estimator
    checks = []
    if estimator in ("dmin-tail", "dmin1-tail"):
        checks.append(_uniform_in_n(report, hard=estimator == "dmin-tail"))
        spread = _spread(point.scaled_median for point in report.points)
        checks.append(AcceptanceCheck(
            "scaled_median_band", spread <= SCALED_MEDIAN_BAND, spread, SCALED_MEDIAN_BAND,
            hard=estimator == "dmin1-tail",
        ))
    if estimator in ("triple-pair", "triple-event", "close-pairs"):
        dominated = all(
            point.bound is None or point.estimate.lower <= point.bound
            for point in report.points
        )
        checks.append(AcceptanceCheck("bound_dominates_estimate", dominated, hard=False))
    if estimator == "cutoff-bound":
        worst = report.fits["max_ratio"]["value"]
        limit = report.parameters["ratio_limit"]
        checks.append(AcceptanceCheck("ratio_within_limit", worst <= limit, worst, limit))
    if estimator == "wasserstein-scaling" and "slope" in report.fits:
        d = report.parameters["d"]
        slope = report.fits["slope"]["value"]
        # the rate -1/d carries a log correction in d = 2
        target = -1.0 / d
        checks.append(AcceptanceCheck(
            "scaling_slope", abs(slope - target) <= 0.25, slope, target, hard=False,
        ))
    if estimator == "assumptions-probability":
        estimates = [point.estimate for point in report.points]
        trend = all(later.upper >= earlier.lower for earlier, later in zip(estimates, estimates[1:]))
        checks.append(AcceptanceCheck(
            "satisfaction_nondecreasing", trend,
            detail=", ".join(f"N={p.n}: {p.estimate.estimate:.3g}" for p in report.points),
        ))
    return checks


# ─── Enforcement ────────────────────────────────────────────────────

def enforce(checks: list[AcceptanceCheck], strict: bool) -> None:
    """Log every failed check; raise under ``strict`` when a hard one failed."""
    failed = [check for check in checks if not check.passed]
    for check in failed:
        logger.warning(
            "Acceptance %s check '%s' failed (value=%s, limit=%s) %s",
            "hard" if check.hard else "soft", check.name, check.value, check.limit, check.detail,
        )
    hard = [check.name for check in failed if check.hard]
    if strict and hard:
        raise AcceptanceError(f"Hard acceptance checks failed: {', '.join(hard)}", checks=hard)
