"""
Optimal Transport Services
==========================

Exact discrete Wasserstein distances between point clouds.

    wasserstein_p        equal-size uniform clouds: linear assignment;
                         otherwise network simplex on grid-rounded weights
    wasserstein_inf      bottleneck matching, equal-size uniform clouds
    wasserstein          dispatch on p
    brute_force_wasserstein   permutation oracle for m <= 8
    empirical_distance   sample vs reference cloud, dense or subsampled
"""

import itertools
import logging
import math
from typing import Optional

import numpy as np
import ot
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching
from scipy.spatial.distance import cdist

from core.exceptions import ProblemTooLargeError, ValidationError
from core.services import map_ordered
from meanfield.config import config
from particles.services import compensated_sum

from .models import EmpiricalDistance, PointCloud, TransportResult

logger = logging.getLogger(__name__)

ESTIMATORS = ("auto", "dense", "subsampled")


# ─── Helpers ────────────────────────────────────────────────────────

def _as_cloud(value) -> PointCloud:
    if isinstance(value, PointCloud):
        return value
    positions = getattr(value, "positions", value)
    return PointCloud(positions)


def _check_pair(a: PointCloud, b: PointCloud) -> None:
    if a.dim != b.dim:
        raise ValidationError(f"Cloud dimensions differ: {a.dim} vs {b.dim}", field="dim")


def _check_p(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValidationError(f"p must lie in [1, inf] (got {p})", field="p")
    return p


def _cost_matrix(a: PointCloud, b: PointCloud, p: float) -> tuple[np.ndarray, float]:
    """
    Costs |x - y|^p, normalized by the largest distance when p is large.

    Returns (cost, scale) with W_p = scale * (sum of plan * cost)^(1/p).
    """
    dist = cdist(a.points, b.points)
    if p == 1.0:
        return dist, 1.0
    scale = 1.0
    if p > config.numerics.log_space_p:
        largest = float(dist.max())
        if largest > 0:
            scale = largest
            dist = dist / scale
    return dist ** p, scale


def _grid_weights(weights: np.ndarray, bits: int) -> np.ndarray:
    """Round weights to multiples of 2^-bits summing exactly to 1."""
    unit = float(2 ** bits)
    counts = np.floor(weights * unit + 0.5)
    counts[int(np.argmax(counts))] += unit - counts.sum()
    return counts / unit


# ─── Solvers ────────────────────────────────────────────────────────

def wasserstein_p(a, b, p: float) -> TransportResult:
    """
    Exact W_p for finite p.

    Equal-size uniform clouds are solved as a linear assignment. The general
    weighted case runs the network simplex with weights rounded to a 2^-40
    grid; the rounding error in mass is reported as ``mass_error_bound``.
    """
    a, b = _as_cloud(a), _as_cloud(b)
    _check_pair(a, b)
    p = _check_p(p)
    if math.isinf(p):
        raise ValidationError("wasserstein_p requires finite p; use wasserstein_inf", field="p")
    cost, scale = _cost_matrix(a, b, p)

    if a.m == b.m and a.is_uniform and b.is_uniform:
        rows, cols = linear_sum_assignment(cost)
        total = float(compensated_sum(cost[rows, cols])) / a.m
        plan = [(int(i), int(j), 1.0 / a.m) for i, j in zip(rows, cols)]
        return TransportResult(p, scale * total ** (1.0 / p), plan, optimal=True, method="assignment")

    bits = config.numerics.weight_grid_bits
    wa, wb = _grid_weights(a.weights, bits), _grid_weights(b.weights, bits)
    gamma, log = ot.emd(wa, wb, cost, numItermax=max(100000, 50 * a.m * b.m), log=True)
    optimal = int(log.get("result_code", 1)) == 1
    if not optimal:
        logger.warning("Network simplex stopped early: %s", log.get("warning"))
    rows, cols = np.nonzero(gamma > 0)
    masses = gamma[rows, cols]
    total = float(compensated_sum(masses * cost[rows, cols]))
    plan = [(int(i), int(j), float(w)) for i, j, w in zip(rows, cols, masses)]
    return TransportResult(
        p,
        scale * max(total, 0.0) ** (1.0 / p),
        plan,
        optimal=optimal,
        mass_error_bound=max(a.m, b.m) * 2.0 ** -bits,
        method="network-simplex",
    )


def _perfect_matching(dist: np.ndarray, threshold: float) -> Optional[np.ndarray]:
    graph = csr_matrix(dist <= threshold)
    match = maximum_bipartite_matching(graph, perm_type="column")
    if np.any(match < 0):
        return None
    return match


def _releasable_columns(feasible: np.ndarray, match: np.ndarray, row: int) -> dict[int, int]:
    """
    Columns ``row`` could take if it gave up ``match[row]``.

    Maps each such column to the column its current owner moves to. Only
    rows after ``row`` may move; earlier rows are fixed.
    """
    old = int(match[row])
    parent: dict[int, int] = {}
    frontier = [old]
    moved = np.zeros(len(match), dtype=bool)
    moved[: row + 1] = True
    while frontier:
        column = frontier.pop()
        for u in np.flatnonzero(feasible[:, column] & ~moved):
            moved[u] = True
            parent[int(match[u])] = column
            frontier.append(int(match[u]))
    return parent


def _canonical_matching(dist: np.ndarray, threshold: float, match: np.ndarray) -> np.ndarray:
    """
    The perfect matching with edges <= threshold that gives each row, in
    index order, its cheapest still-completable column; ties by column.
    """
    match = match.copy()
    owner = np.empty_like(match)
    owner[match] = np.arange(len(match))
    feasible = dist <= threshold
    locked = np.zeros(len(match), dtype=bool)
    for i in range(len(match)):
        cols = np.flatnonzero(feasible[i] & ~locked)
        order = cols[np.lexsort((cols, dist[i, cols]))]
        old = int(match[i])
        if order[0] != old:
            parent = _releasable_columns(feasible, match, i)
            target = next(int(c) for c in order if c == old or c in parent)
            column, row = target, i
            while column != old:
                displaced = int(owner[column])
                match[row], owner[column] = column, row
                row, column = displaced, parent[column]
            match[row], owner[old] = old, row
        locked[match[i]] = True
    return match


def wasserstein_inf(a, b) -> TransportResult:
    """
    Exact W_inf (bottleneck distance) for equal-size uniform clouds.

    Binary search over the sorted distinct pairwise distances; a threshold
    is feasible when the graph of edges with d <= threshold has a perfect
    matching. The returned plan is then fixed by (cost, i, j) order: each
    source point in turn takes its nearest target that still leaves a
    perfect matching, lower target index first on equal cost.
    """
    a, b = _as_cloud(a), _as_cloud(b)
    _check_pair(a, b)
    if a.m != b.m or not (a.is_uniform and b.is_uniform):
        raise ValidationError(
            f"W_inf needs equal-size uniform clouds (got {a.m} and {b.m} points); resample first",
            field="m",
        )
    dist = cdist(a.points, b.points)
    # every row and column must be covered
    lower = max(dist.min(axis=1).max(), dist.min(axis=0).max())
    candidates = np.unique(dist[dist >= lower])
    lo, hi = 0, len(candidates) - 1
    best = _perfect_matching(dist, candidates[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        match = _perfect_matching(dist, candidates[mid])
        if match is None:
            lo = mid + 1
        else:
            hi, best = mid, match
    best = _canonical_matching(dist, candidates[hi], best)
    plan = [(int(i), int(j), 1.0 / a.m) for i, j in enumerate(best)]
    return TransportResult(math.inf, float(candidates[hi]), plan, optimal=True, method="bottleneck")


def wasserstein(a, b, p: float) -> TransportResult:
    """W_p for p in [1, inf]."""
    p = _check_p(p)
    if math.isinf(p):
        return wasserstein_inf(a, b)
    return wasserstein_p(a, b, p)


def brute_force_wasserstein(a, b, p: float) -> float:
    """Minimum over all m! matchings; reference oracle for small instances."""
    a, b = _as_cloud(a), _as_cloud(b)
    _check_pair(a, b)
    p = _check_p(p)
    limit = config.numerics.bruteforce_max_points
    if a.m != b.m or not (a.is_uniform and b.is_uniform):
        raise ValidationError("Brute force needs equal-size uniform clouds", field="m")
    if a.m > limit:
        raise ProblemTooLargeError(
            f"Brute force refuses m={a.m} (> {limit})", size=a.m, limit=limit,
        )
    dist = cdist(a.points, b.points)
    rows = np.arange(a.m)
    best = math.inf
    for perm in itertools.permutations(range(a.m)):
        matched = dist[rows, list(perm)]
        if math.isinf(p):
            value = float(matched.max())
        else:
            value = float(np.mean(matched ** p)) ** (1.0 / p)
        best = min(best, value)
    return best


# ─── Sample vs reference ────────────────────────────────────────────

def discretization_floor(m: int, dim: int, diameter: float = 1.0) -> float:
    """Typical W_p scale of an m-point sample of a d-dimensional density."""
    return diameter * m ** (-1.0 / dim)


def choose_estimator(n: int, m: int, p: float, estimator: str = "auto") -> str:
    """'dense' when the full cost matrix fits the budget and p is finite."""
    if estimator not in ESTIMATORS:
        raise ValidationError(f"Unknown estimator '{estimator}'", field="estimator")
    if estimator != "auto":
        return estimator
    if math.isinf(p) and n != m:
        return "subsampled"
    return "dense" if n * m <= config.numerics.max_cost_entries else "subsampled"


def empirical_distance(
    sample,
    reference,
    p: float,
    seed: int = 0,
    estimator: str = "auto",
    resamples: Optional[int] = None,
    workers: int = 1,
) -> EmpiricalDistance:
    """
    W_p between a sample cloud and a (larger) reference cloud.

    The subsampled estimator draws ``resamples`` subsets of the reference of
    the sample's size and reports the median distance; it is the only
    option for W_inf between clouds of different sizes.
    """
    sample, reference = _as_cloud(sample), _as_cloud(reference)
    _check_pair(sample, reference)
    p = _check_p(p)
    n, m = sample.m, reference.m
    chosen = choose_estimator(n, m, p, estimator)
    floor = discretization_floor(m, sample.dim)

    if chosen == "dense" or n == m:
        value = wasserstein(sample, reference, p).value
        return EmpiricalDistance(value, p, "dense", n, m, floor, 1, [value])

    if n > m:
        raise ValidationError(f"Reference cloud ({m}) smaller than sample ({n})", field="reference")
    resamples = resamples or config.verifier.inf_resamples
    seeds = np.random.SeedSequence(int(seed)).spawn(resamples)

    def one(child: np.random.SeedSequence) -> float:
        rng = np.random.Generator(np.random.Philox(child))
        indices = np.sort(rng.choice(m, size=n, replace=False))
        return wasserstein(sample, reference.subset(indices), p).value

    values = map_ordered(one, seeds, workers=workers)
    return EmpiricalDistance(float(np.median(values)), p, "subsampled", n, m, floor, resamples, values)


def plan_rows(result: TransportResult, a, b) -> list[tuple]:
    """(i, j, mass, distance) rows for the plan CSV."""
    a, b = _as_cloud(a), _as_cloud(b)
    if not result.plan:
        return []
    i = np.array([row[0] for row in result.plan])
    j = np.array([row[1] for row in result.plan])
    dist = np.linalg.norm(a.points[i] - b.points[j], axis=1)
    return [(int(ii), int(jj), mass, float(dd)) for (ii, jj, mass), dd in zip(result.plan, dist)]
