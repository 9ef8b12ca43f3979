"""
Per-replica statistics.

Each function maps one configuration to (statistic, event flag). The
event definitions follow the probability estimates they feed:

    dmin_tail          d_min <= L^-1 N^(-2/d)
    dmin1_tail         d_min,1 <= L^-1 N^(-3/(2d))
    triple_pair        exists i != j != k: d_ij <= L1, d_ik <= L2
    triple_event       exists i != j != k: d_ik < delta, N^-1 d_ij^-1 d_ik^-beta >= N^-eps
    close_pairs        #{i : d_(i, i_nn) <= delta N^(-1/d)} >= 2 theta N
"""

import numpy as np
from scipy.spatial.distance import cdist

from particles import ParticleConfig, distance_report, neighbor_index


def dmin_tail(config_: ParticleConfig, L: float) -> tuple[float, bool]:
    threshold = config_.n ** (-2.0 / config_.dim) / L
    d_min = distance_report(config_, 0.0).d_min
    return d_min, d_min <= threshold


def dmin1_tail(config_: ParticleConfig, L: float) -> tuple[float, bool]:
    threshold = config_.n ** (-1.5 / config_.dim) / L
    d_min1 = distance_report(config_, 0.0).d_min1
    return d_min1, d_min1 <= threshold


def triple_pair(config_: ParticleConfig, l1: float, l2: float) -> tuple[float, bool]:
    """
    Statistic: number of centres i that have two distinct neighbours within
    (L1, L2). The nearest neighbour goes with the smaller radius.
    """
    if config_.n < 3:
        return 0.0, False
    report = distance_report(config_, 0.0)
    lo, hi = min(l1, l2), max(l1, l2)
    centres = int(np.count_nonzero((report.nn_dist <= lo) & (report.second_dist <= hi)))
    return float(centres), centres > 0


def triple_statistic(config_: ParticleConfig, beta: float, delta: float) -> float:
    """
    max over ordered pairs (i, k) with d_ik < delta and j != i, k of
    N^-1 d_ij^-1 d_ik^-beta; 0 when no pair qualifies.

    For fixed (i, k) the maximum is at the nearest j, which is the nearest
    or second-nearest neighbour of i.
    """
    n = config_.n
    if n < 3 or delta <= 0:
        return 0.0
    index = neighbor_index(config_, delta)
    close = index.distances < delta
    if not np.any(close):
        return 0.0
    pairs, d_ik = index.pairs[close], index.distances[close]
    i = np.concatenate([pairs[:, 0], pairs[:, 1]])
    k = np.concatenate([pairs[:, 1], pairs[:, 0]])
    d_ik = np.concatenate([d_ik, d_ik])
    report = distance_report(config_, 0.0)
    d_ij = np.where(report.nn_index[i] != k, report.nn_dist[i], report.second_dist[i])
    with np.errstate(divide="ignore"):
        values = 1.0 / (n * d_ij * d_ik ** beta)
    return float(np.max(values))


def triple_event(config_: ParticleConfig, beta: float, eps: float, delta: float) -> tuple[float, bool]:
    value = triple_statistic(config_, beta, delta)
    return value, value >= config_.n ** -eps


def triple_event_bruteforce(config_: ParticleConfig, beta: float, eps: float, delta: float) -> bool:
    """Direct enumeration of all triples; reference oracle for small N."""
    n = config_.n
    dist = cdist(config_.positions, config_.positions)
    threshold = n ** -eps
    for i in range(n):
        for k in range(n):
            if k == i or not dist[i, k] < delta:
                continue
            others = np.ones(n, dtype=bool)
            others[[i, k]] = False
            with np.errstate(divide="ignore"):
                values = 1.0 / (n * dist[i, others] * dist[i, k] ** beta)
            if np.any(values >= threshold):
                return True
    return False


def close_pairs(config_: ParticleConfig, delta: float, theta: float) -> tuple[float, bool]:
    """Statistic: fraction of particles with a neighbour within delta N^(-1/d)."""
    n = config_.n
    radius = delta * n ** (-1.0 / config_.dim)
    count = int(np.count_nonzero(distance_report(config_, 0.0).nn_dist <= radius))
    return count / n, count >= 2.0 * theta * n
