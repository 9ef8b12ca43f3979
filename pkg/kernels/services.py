"""
Kernel Services
===============

Vectorized evaluation of ``KernelSpec`` kernels and the numerical
certificates attached to them:

    evaluate            K on arrays of shape (..., d), K(0) = 0
    eval_kernel         single-point evaluation with dimension check
    check_nonattractive sampled (K(x) - K(-x)) . x >= 0
    check_c_alpha       sampled growth constant and divergence of K
    mollify / scale     derived kernels
    shell_sampler       random points with r_min <= |x| <= r_max
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from core.exceptions import ValidationError
from meanfield.config import config

from .spec import KernelFamily, KernelSpec, Orientation

logger = logging.getLogger(__name__)

Sampler = Callable[[int], np.ndarray]


# ─── Evaluation ─────────────────────────────────────────────────────

def _radius(x: np.ndarray) -> np.ndarray:
    return np.linalg.norm(x, axis=-1, keepdims=True)


def _inverse_power(r: np.ndarray, power: float) -> np.ndarray:
    """r^-power with 0 at r = 0."""
    denom = r ** power
    return np.divide(1.0, denom, out=np.zeros_like(denom), where=denom > 0)


def _power_law(kernel: KernelSpec, x: np.ndarray) -> np.ndarray:
    if kernel.orientation is Orientation.CUSTOM:
        out = np.asarray(kernel.profile(x), dtype=float)
        return np.where(_radius(x) > 0, out, 0.0)
    weight = _inverse_power(_radius(x), kernel.alpha + 1.0)
    if kernel.orientation is Orientation.ROTATIONAL:
        perp = np.stack([-x[..., 1], x[..., 0]], axis=-1)
        return perp * weight
    if kernel.orientation is Orientation.ATTRACTIVE:
        return -(x * weight)
    return x * weight


def _oseen(kernel: KernelSpec, x: np.ndarray) -> np.ndarray:
    g = np.asarray(kernel.g, dtype=float)
    r = _radius(x)
    inv_r = _inverse_power(r, 1.0)
    projection = np.asarray(x @ g)[..., None] * inv_r * inv_r
    return (g + x * projection) * inv_r / (8.0 * np.pi)


def _mollified(kernel: KernelSpec, x: np.ndarray) -> np.ndarray:
    eps = kernel.epsilon
    out = evaluate(kernel.base, x)
    r = _radius(x)[..., 0]
    inside = (r > 0) & (r < eps)
    if np.any(inside):
        xi = x[inside]
        ri = r[inside][:, None]
        # linear taper from the eps-sphere value down to 0 at the origin
        out[inside] = evaluate(kernel.base, eps * xi / ri) * (ri / eps)
    return out


def evaluate(kernel: KernelSpec, x) -> np.ndarray:
    """
    Evaluate ``kernel`` on points of shape (..., d). Returns the same shape.

    K(0) is defined as 0 for every family.
    """
    x = np.asarray(x, dtype=float)
    family = kernel.family
    if family is KernelFamily.ZERO:
        return np.zeros_like(x)
    if family is KernelFamily.POWER_LAW:
        return _power_law(kernel, x)
    if family is KernelFamily.OSEEN_GRAVITY:
        return _oseen(kernel, x)
    if family is KernelFamily.MOLLIFIED:
        return _mollified(kernel, x)
    if family is KernelFamily.SCALED:
        return kernel.factor * evaluate(kernel.base, x)
    raise ValidationError(f"Unknown kernel family: {family}", field="family")


def eval_kernel(kernel: KernelSpec, x) -> np.ndarray:
    """K(x) for a single point x in R^d."""
    x = np.asarray(x, dtype=float)
    if x.shape != (kernel.dimension,):
        raise ValidationError(
            f"Point has shape {x.shape}, kernel expects ({kernel.dimension},)",
            field="x",
        )
    return evaluate(kernel, x)


# ─── Derived kernels ────────────────────────────────────────────────

def mollify(kernel: KernelSpec, eps: float) -> KernelSpec:
    """
    K_eps = K for |x| >= eps, and K_eps(x) = (|x|/eps) K(eps x/|x|) inside.

    K_eps is bounded, continuous and antisymmetric whenever K is.
    """
    eps = float(eps)
    if not np.isfinite(eps) or eps <= 0:
        raise ValidationError(f"Mollification radius must be > 0 (got {eps})", field="epsilon")
    return KernelSpec(
        KernelFamily.MOLLIFIED, kernel.dimension, alpha=kernel.alpha,
        base=kernel, epsilon=eps,
    )


def scale(kernel: KernelSpec, c: float) -> KernelSpec:
    """c * K."""
    c = float(c)
    if not np.isfinite(c):
        raise ValidationError(f"Scale factor must be finite (got {c})", field="c")
    return KernelSpec(
        KernelFamily.SCALED, kernel.dimension, alpha=kernel.alpha,
        base=kernel, factor=c,
    )


# ─── Samplers ───────────────────────────────────────────────────────

def shell_sampler(dimension: int, r_min: float, r_max: float, seed: int = 0) -> Sampler:
    """
    Sampler of points with isotropic direction and radius uniform in
    [r_min, r_max]. Deterministic for a given seed and call sequence.
    """
    if not 0 <= r_min <= r_max:
        raise ValidationError(f"Invalid shell [{r_min}, {r_max}]", field="r_min")
    rng = np.random.Generator(np.random.Philox(seed))

    def sample(n: int) -> np.ndarray:
        directions = rng.standard_normal((n, dimension))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = rng.uniform(r_min, r_max, size=(n, 1))
        return directions * radii

    return sample


# ─── Certificates ───────────────────────────────────────────────────

@dataclass
class NonAttractiveReport:
    """Largest sampled violation of (K(x) - K(-x)) . x >= 0."""
    max_violation: float
    worst_point: np.ndarray
    n_samples: int

    @property
    def passed(self) -> bool:
        return self.max_violation <= 0.0


@dataclass
class CAlphaReport:
    """Sampled growth constant and divergence of a kernel."""
    c_k_estimate: float
    max_div: float
    n_used: int
    n_skipped: int

    @property
    def flagged(self) -> bool:
        """Some samples were too close to the origin for the step size."""
        return self.n_skipped > 0


def check_nonattractive(kernel: KernelSpec, sampler: Sampler, n_samples: int) -> NonAttractiveReport:
    """
    Sample x and report max over samples of -(K(x) - K(-x)) . x.

    A non-positive ``max_violation`` means no attractive direction was
    found. ``worst_point`` is the sample with the most negative product.
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be >= 1", field="n_samples")
    x = np.asarray(sampler(n_samples), dtype=float)
    product = np.einsum("nd,nd->n", evaluate(kernel, x) - evaluate(kernel, -x), x)
    worst = int(np.argmin(product))
    max_violation = float(max(0.0, -product[worst]))
    if max_violation > 0:
        logger.warning(
            "Kernel %s is attractive somewhere: violation %.3e at %s",
            kernel.family.value, max_violation, x[worst],
        )
    return NonAttractiveReport(max_violation, x[worst].copy(), n_samples)


def _jacobian(kernel: KernelSpec, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Central-difference Jacobian, shape (n, d, d) with J[n, i, k] = dK_i/dx_k."""
    n, d = x.shape
    jac = np.empty((n, d, d))
    for k in range(d):
        step = np.zeros((n, d))
        step[:, k] = h
        jac[:, :, k] = (evaluate(kernel, x + step) - evaluate(kernel, x - step)) / (2.0 * h[:, None])
    return jac


def check_c_alpha(
    kernel: KernelSpec,
    sampler: Sampler,
    n_samples: int,
    fd_step: Optional[float] = None,
) -> CAlphaReport:
    """
    Estimate C_K = max over samples of |x|^alpha |K(x)| + |x|^(alpha+1) |grad K(x)|
    (spectral norm) and the largest |div K|.

    ``fd_step`` is an absolute difference step; by default the step is
    relative, ``fd_step_relative * |x|``. Samples with |x| < 10 * step
    are skipped and counted in ``n_skipped``.
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be >= 1", field="n_samples")
    x = np.asarray(sampler(n_samples), dtype=float)
    r = np.linalg.norm(x, axis=1)
    if fd_step is None:
        h = config.numerics.fd_step_relative * r
    else:
        h = np.full_like(r, float(fd_step))
    usable = (r > 0) & (r >= 10.0 * h)
    n_skipped = int(np.count_nonzero(~usable))
    if n_skipped:
        logger.info("check_c_alpha skipped %d/%d samples near the origin", n_skipped, n_samples)
    x, r, h = x[usable], r[usable], h[usable]
    if len(x) == 0:
        return CAlphaReport(float("nan"), float("nan"), 0, n_skipped)

    jac = _jacobian(kernel, x, h)
    value = np.linalg.norm(evaluate(kernel, x), axis=1)
    grad = np.linalg.norm(jac, ord=2, axis=(1, 2))
    alpha = kernel.alpha
    estimate = r ** alpha * value + r ** (alpha + 1.0) * grad
    divergence = np.abs(np.trace(jac, axis1=1, axis2=2))
    return CAlphaReport(
        c_k_estimate=float(np.max(estimate)),
        max_div=float(np.max(divergence)),
        n_used=len(x),
        n_skipped=n_skipped,
    )


@lru_cache(maxsize=64)
def resolve_c_k(kernel: KernelSpec, r_min: float = 0.5, r_max: float = 2.0) -> float:
    """
    Analytic C_K when known, otherwise a sampled estimate on the shell
    r_min <= |x| <= r_max (cached per kernel and shell).
    """
    if kernel.c_k_hint is not None:
        return float(kernel.c_k_hint)
    if not 0 < r_min <= r_max or not np.isfinite(r_max):
        r_min, r_max = 0.5, 2.0
    sampler = shell_sampler(kernel.dimension, r_min, r_max, seed=0)
    report = check_c_alpha(kernel, sampler, config.numerics.certificate_samples)
    logger.info(
        "Estimated C_K=%.6g for %s kernel on [%.3g, %.3g]",
        report.c_k_estimate, kernel.family.value, r_min, r_max,
    )
    return report.c_k_estimate
