"""
particles: configuration statistics of N-particle systems.

Usage::

    from particles import ParticleConfig, distance_report, cutoff_sum

    report = distance_report(ParticleConfig(positions), delta=0.01)
    s_value = cutoff_sum(ParticleConfig(positions), beta=1.5, delta=0.01).value
"""

from .models import CutoffSum, DistanceReport, NeighborIndex, ParticleConfig
from .services import (
    compensated_sum,
    cutoff_sum,
    distance_block,
    distance_report,
    map_row_blocks,
    nearest_neighbors,
    neighbor_index,
    pair_distances,
    row_blocks,
)

__all__ = [
    "ParticleConfig",
    "DistanceReport",
    "CutoffSum",
    "NeighborIndex",
    "distance_report",
    "nearest_neighbors",
    "cutoff_sum",
    "neighbor_index",
    "compensated_sum",
    "distance_block",
    "pair_distances",
    "row_blocks",
    "map_row_blocks",
]
