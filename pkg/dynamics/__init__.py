"""
dynamics: first-order N-particle dynamics and the blob reference solver.

Usage::

    from dynamics import IntegratorControls, simulate

    trajectory = simulate(config0, kernel, T=1.0, controls=IntegratorControls())
"""

from .models import IntegratorControls, Trajectory
from .services import (
    RefinementStudy,
    adaptive_dt,
    default_blob_radius,
    meanfield_reference,
    record_times,
    refinement_study,
    rhs,
    simulate,
    two_body_exact,
    velocities,
)

__all__ = [
    "IntegratorControls",
    "Trajectory",
    "rhs",
    "velocities",
    "adaptive_dt",
    "simulate",
    "record_times",
    "two_body_exact",
    "meanfield_reference",
    "refinement_study",
    "default_blob_radius",
    "RefinementStudy",
]
