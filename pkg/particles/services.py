"""
Configuration Statistics
========================

Exact pairwise-distance statistics of particle configurations:
nearest-neighbour tables, d_min, d_min,1, close sets and cut-off sums.

All O(N^2) sweeps run over fixed row blocks. Each block is reduced on its
own and results are assembled in block order, so values do not depend on
the number of workers.
"""

import logging
from typing import Callable, Optional

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from core.exceptions import ValidationError
from core.services import map_ordered
from meanfield.config import config

from .models import CutoffSum, DistanceReport, NeighborIndex, ParticleConfig

logger = logging.getLogger(__name__)

# Upper bound on the entries of one (rows x width) block
_MAX_BLOCK_ENTRIES = 1 << 22


# ─── Blocking and summation ─────────────────────────────────────────

def row_blocks(n_rows: int, width: int, block_size: Optional[int] = None) -> list[slice]:
    """Fixed row slices so that rows * width stays within the block budget."""
    block_size = block_size or config.numerics.block_size
    rows = max(1, min(block_size, _MAX_BLOCK_ENTRIES // max(width, 1)))
    return [slice(start, min(start + rows, n_rows)) for start in range(0, n_rows, rows)]


def map_row_blocks(fn: Callable[[slice], np.ndarray], n_rows: int, width: int, workers: int = 1) -> np.ndarray:
    """Apply ``fn`` to every row block and stack the results in block order."""
    blocks = row_blocks(n_rows, width)
    return np.concatenate(map_ordered(fn, blocks, workers=workers), axis=0)


def compensated_sum(values, axis: int = -1) -> np.ndarray:
    """
    Sum along ``axis`` with pairwise reduction and TwoSum error terms.

    The reduction order is fixed by the array length alone, and the rounding
    error of every addition is carried along and added back at the end.
    """
    v = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    if v.shape[-1] == 0:
        return np.zeros(v.shape[:-1])
    error = np.zeros(v.shape[:-1])
    while v.shape[-1] > 1:
        if v.shape[-1] % 2:
            v = np.concatenate([v, np.zeros(v.shape[:-1] + (1,))], axis=-1)
        a, b = v[..., 0::2], v[..., 1::2]
        s = a + b
        bb = s - a
        error = error + np.sum((a - (s - bb)) + (b - bb), axis=-1)
        v = s
    return v[..., 0] + error


def distance_block(positions: np.ndarray, rows: slice, other: Optional[np.ndarray] = None) -> np.ndarray:
    """Euclidean distances from ``positions[rows]`` to every point of ``other``."""
    other = positions if other is None else other
    return cdist(positions[rows], other)


def pair_distances(positions: np.ndarray, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """d_ij for index arrays, accumulated in the same order as ``distance_block``."""
    total = np.zeros(len(i))
    for k in range(positions.shape[1]):
        diff = positions[i, k] - positions[j, k]
        total += diff * diff
    return np.sqrt(total)


# ─── Nearest neighbours ─────────────────────────────────────────────

def nearest_neighbors(config_: ParticleConfig, k: int, workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """
    The k nearest other particles of every particle.

    Returns (indices, distances), both of shape (N, k), ordered by distance.
    Ties go to the smallest index.
    """
    positions = config_.positions
    n = config_.n
    if not 1 <= k <= n - 1:
        raise ValidationError(f"k must lie in [1, N-1] = [1, {n - 1}] (got {k})", field="k")

    def block(rows: slice) -> np.ndarray:
        dist = distance_block(positions, rows)
        local = np.arange(rows.stop - rows.start)
        dist[local, local + rows.start] = np.inf
        out = np.empty((len(local), k, 2))
        for column in range(k):
            # argmin returns the first minimum, i.e. the smallest index
            idx = np.argmin(dist, axis=1)
            out[:, column, 0] = idx
            out[:, column, 1] = dist[local, idx]
            dist[local, idx] = np.inf
        return out

    table = map_row_blocks(block, n, n, workers=workers)
    return table[:, :, 0].astype(np.int64), table[:, :, 1]


def distance_report(config_: ParticleConfig, delta: float, workers: int = 1) -> DistanceReport:
    """
    d_min, nearest-neighbour table, d_min,1 and the close set
    D_delta = {i : d_(i, i_nn) < delta}.
    """
    if not np.isfinite(delta) or delta < 0:
        raise ValidationError(f"delta must be finite and >= 0 (got {delta})", field="delta")
    n = config_.n
    k = 2 if n >= 3 else 1
    indices, distances = nearest_neighbors(config_, k, workers=workers)
    nn_dist = distances[:, 0]
    if n >= 3:
        d_min1 = float(np.min(distances[:, 1]))
    else:
        d_min1 = float("inf")
    close_set = np.flatnonzero(nn_dist < delta)
    return DistanceReport(
        d_min=float(np.min(nn_dist)),
        nn_index=indices[:, 0],
        nn_dist=nn_dist,
        d_min1=d_min1,
        delta=float(delta),
        close_set=close_set,
        close_mass=len(close_set) / n,
        d_min1_defined=n >= 3,
        second_index=indices[:, 1] if n >= 3 else None,
        second_dist=distances[:, 1] if n >= 3 else None,
        time=config_.time,
    )


# ─── Cut-off sums ───────────────────────────────────────────────────

def cutoff_sum(config_: ParticleConfig, beta: float, delta: float, workers: int = 1) -> CutoffSum:
    """
    S_(beta, delta) = max_i sum over j with d_ij > delta of d_ij^-beta.

    Per-row sums run over ascending j with compensated accumulation.
    """
    if not beta > 0:
        raise ValidationError(f"beta must be > 0 (got {beta})", field="beta")
    if not delta >= 0:
        raise ValidationError(f"delta must be >= 0 (got {delta})", field="delta")
    positions = config_.positions
    n = config_.n

    def block(rows: slice) -> np.ndarray:
        dist = distance_block(positions, rows)
        far = dist > delta
        terms = np.zeros_like(dist)
        terms[far] = dist[far] ** -beta
        return compensated_sum(terms, axis=1)

    per_particle = map_row_blocks(block, n, n, workers=workers)
    return CutoffSum(per_particle, float(np.max(per_particle)), float(beta), float(delta))


# ─── Fixed-radius neighbours ────────────────────────────────────────

def neighbor_index(config_: ParticleConfig, radius: float) -> NeighborIndex:
    """
    All pairs with d_ij <= radius.

    Candidates come from a k-d tree queried with a slightly enlarged radius;
    each candidate is then re-measured with ``pair_distances`` so the result
    agrees exactly with the dense distance matrix.
    """
    if not radius > 0:
        raise ValidationError(f"radius must be > 0 (got {radius})", field="radius")
    positions = config_.positions
    tree = cKDTree(positions)
    candidates = tree.query_pairs(radius * (1.0 + 1e-9), output_type="ndarray")
    if len(candidates) == 0:
        return NeighborIndex(config_.n, float(radius), np.empty((0, 2), dtype=np.int64), np.empty(0))
    candidates = np.sort(candidates, axis=1)
    order = np.lexsort((candidates[:, 1], candidates[:, 0]))
    candidates = candidates[order].astype(np.int64)
    dist = pair_distances(positions, candidates[:, 0], candidates[:, 1])
    keep = dist <= radius
    logger.debug("neighbor_index: %d candidate pairs, %d within %.3g", len(candidates), int(keep.sum()), radius)
    return NeighborIndex(config_.n, float(radius), candidates[keep], dist[keep])

