"""
kernels: interaction kernels K: R^d -> R^d and their certificates.

Usage::

    from kernels import KernelSpec, evaluate, mollify

    kernel = KernelSpec.power_law(alpha=0.5, dimension=3)
    velocities = evaluate(kernel, differences)
"""

from .spec import KernelFamily, KernelSpec, Orientation
from .services import (
    CAlphaReport,
    NonAttractiveReport,
    check_c_alpha,
    check_nonattractive,
    eval_kernel,
    evaluate,
    mollify,
    resolve_c_k,
    scale,
    shell_sampler,
)

__all__ = [
    # Types
    "KernelFamily",
    "KernelSpec",
    "Orientation",
    # Evaluation
    "evaluate",
    "eval_kernel",
    "mollify",
    "scale",
    # Certificates
    "check_nonattractive",
    "check_c_alpha",
    "resolve_c_k",
    "shell_sampler",
    "NonAttractiveReport",
    "CAlphaReport",
]
