from .integrator import adaptive_dt, record_times, rhs, simulate, two_body_exact, velocities
from .reference import RefinementStudy, default_blob_radius, meanfield_reference, refinement_study

__all__ = [
    # Integrator
    "rhs",
    "velocities",
    "adaptive_dt",
    "simulate",
    "record_times",
    "two_body_exact",
    # Reference solver
    "meanfield_reference",
    "refinement_study",
    "default_blob_radius",
    "RefinementStudy",
]
