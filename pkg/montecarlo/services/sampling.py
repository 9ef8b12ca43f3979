"""
Seeded sampling.

Every replica draws from a counter-based Philox generator keyed by
(seed, N, replica), so a replica's configuration does not depend on how
replicas are spread over workers.
"""

from typing import Union

import numpy as np

from core.exceptions import ValidationError
from particles import ParticleConfig

from ..models import DensitySpec

Seed = Union[int, np.random.SeedSequence]


def replica_seeds(seed: int, n: int, replicas: int) -> list[np.random.SeedSequence]:
    """Seeds of replicas 0..R-1 at system size N."""
    return [np.random.SeedSequence(int(seed), spawn_key=(int(n), r)) for r in range(int(replicas))]


def derive(seq: np.random.SeedSequence, k: int) -> np.random.SeedSequence:
    """k-th independent stream below ``seq`` (stateless, unlike ``spawn``)."""
    return np.random.SeedSequence(seq.entropy, spawn_key=tuple(seq.spawn_key) + (int(k),))


def int_seed(seq: np.random.SeedSequence) -> int:
    """32-bit integer seed drawn from ``seq``, for APIs that take an int."""
    return int(seq.generate_state(1, np.uint32)[0])


def generator(seed: Seed) -> np.random.Generator:
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(seed))


def sample_points(density: DensitySpec, n: int, seed: Seed) -> np.ndarray:
    """n i.i.d. draws from rho0: uniform cube sample pushed through Phi."""
    u = generator(seed).random((int(n), density.dimension))
    return density.push(u)


def sample_config(density: DensitySpec, n: int, seed: Seed) -> ParticleConfig:
    """Identical (density, n, seed) give bitwise identical configurations."""
    if n < 2:
        raise ValidationError(f"n must be >= 2 (got {n})", field="n")
    return ParticleConfig(sample_points(density, n, seed))


def density_sampler(density: DensitySpec, seed: Seed):
    """Callable m -> (m, d) array, for the blob reference solver."""
    def sample(m: int) -> np.ndarray:
        return sample_points(density, m, seed)
    return sample
