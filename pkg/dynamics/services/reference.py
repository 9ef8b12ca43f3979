"""
Mean-Field Reference Solver
===========================

The limit density rho(t) = Y(t, 0, .)#rho0 is represented by M sample
points moving in their own mollified velocity field (blob method):

    dY_j/dt = (1/M) sum_(k != j) K_eps(Y_j - Y_k),   K_eps = mollify(K, eps)

No velocity field is ever formed on a grid.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from core.exceptions import ValidationError
from kernels import KernelSpec, mollify
from particles import ParticleConfig
from transport import empirical_distance

from ..models import IntegratorControls, Trajectory
from .integrator import simulate

logger = logging.getLogger(__name__)

CloudSampler = Callable[[int], np.ndarray]


def default_blob_radius(m: int, dim: int, diameter: float) -> float:
    """eps = (1/2) M^(-1/(d+2)) diam(supp rho0)."""
    return 0.5 * m ** (-1.0 / (dim + 2)) * diameter


def meanfield_reference(
    rho0_sampler: CloudSampler,
    kernel: KernelSpec,
    m: int,
    T: float,
    controls: Optional[IntegratorControls] = None,
    eps: Optional[float] = None,
    support_diameter: Optional[float] = None,
    companion_n: Optional[int] = None,
    workers: int = 1,
) -> Trajectory:
    """
    Blob-method surrogate of rho(t) on [0, T].

    ``rho0_sampler(m)`` returns an (m, d) array of i.i.d. draws from rho0.
    When ``eps`` is None the default blob radius is used with the support
    diameter (or the bounding-box diameter of the sample).
    """
    if m < 2:
        raise ValidationError(f"Reference cloud needs M >= 2 (got {m})", field="m")
    if companion_n is not None and m < 10 * companion_n:
        logger.warning("Reference cloud M=%d is below 10 N=%d", m, 10 * companion_n)

    initial = ParticleConfig(rho0_sampler(m))
    if eps is None:
        diameter = support_diameter if support_diameter is not None else initial.bounding_diameter()
        eps = default_blob_radius(m, initial.dim, diameter)
    blob = mollify(kernel, eps)
    controls = controls or IntegratorControls.from_defaults(record_diagnostics=False)

    logger.info("Blob reference: M=%d eps=%.4g T=%g", m, eps, T)
    trajectory = simulate(initial, blob, T, controls, workers=workers)
    trajectory.metadata.update({"epsilon": eps, "m": m})
    return trajectory


@dataclass
class RefinementStudy:
    """
    Cauchy sequence of blob solutions under (M, eps) -> (2M, eps/2).

    ``distances[l]`` is W_p between the final clouds of levels l and l+1;
    ``ratios[l]`` = distances[l+1] / distances[l] (below 1 when the
    sequence contracts).
    """

    m_values: list
    eps_values: list
    distances: list = field(default_factory=list)
    ratios: list = field(default_factory=list)
    p: float = 2.0

    @property
    def contracting(self) -> bool:
        return all(r < 1.0 for r in self.ratios)

    def rows(self) -> list[tuple]:
        padded = self.distances + [float("nan")]
        return [(m, eps, dist) for m, eps, dist in zip(self.m_values, self.eps_values, padded)]

    def to_dict(self) -> dict:
        return {
            "m": self.m_values,
            "epsilon": self.eps_values,
            "distances": self.distances,
            "ratios": self.ratios,
            "p": self.p,
            "contracting": self.contracting,
        }


def refinement_study(
    rho0_sampler: CloudSampler,
    kernel: KernelSpec,
    m0: int,
    T: float,
    levels: int = 3,
    eps0: Optional[float] = None,
    support_diameter: Optional[float] = None,
    controls: Optional[IntegratorControls] = None,
    p: float = 2.0,
    seed: int = 0,
    workers: int = 1,
) -> RefinementStudy:
    """Self-convergence of the blob reference under doubling M and halving eps."""
    if levels < 2:
        raise ValidationError("A refinement study needs at least 2 levels", field="levels")
    finals = []
    m_values, eps_values = [], []
    for level in range(levels):
        m = m0 * 2 ** level
        eps = None if eps0 is None else eps0 / 2 ** level
        trajectory = meanfield_reference(
            rho0_sampler, kernel, m, T, controls=controls, eps=eps,
            support_diameter=support_diameter, workers=workers,
        )
        if eps0 is None and level == 0:
            eps0 = trajectory.metadata["epsilon"]
        m_values.append(m)
        eps_values.append(trajectory.metadata["epsilon"])
        finals.append(trajectory.final)

    study = RefinementStudy(m_values, eps_values, p=p)
    for coarse, fine in zip(finals, finals[1:]):
        study.distances.append(empirical_distance(coarse, fine, p, seed=seed, workers=workers).value)
    study.ratios = [b / a if a > 0 else float("nan") for a, b in zip(study.distances, study.distances[1:])]
    logger.info("Refinement distances %s", study.distances)
    return study
