"""
N-Body Integrator
=================

Direct O(N^2) first-order dynamics

    dX_i/dt = (1/N) sum_(j != i) K(X_i - X_j)

with explicit RK4 (default) or Heun steps and a step size tied to the
closest pair, so that no pair moves more than ``eta * d_min`` per step.
"""

import logging
import math
from typing import Optional

import numpy as np

from core.exceptions import BlowUpError, NumericalError, SingularConfigurationError, ValidationError
from kernels import KernelFamily, KernelSpec, evaluate, resolve_c_k
from particles import ParticleConfig, compensated_sum, cutoff_sum, distance_report, map_row_blocks, nearest_neighbors

from ..models import IntegratorControls, Trajectory

logger = logging.getLogger(__name__)

# Clip a step to the next record time when it would stop this close to it
_SNAP = 1e-9


# ─── Velocities ─────────────────────────────────────────────────────

def velocities(positions: np.ndarray, kernel: KernelSpec, workers: int = 1) -> np.ndarray:
    """Velocity field of raw positions; see ``rhs``."""
    n, d = positions.shape
    check_coincident = kernel.is_singular

    def block(rows: slice) -> np.ndarray:
        diff = positions[rows, None, :] - positions[None, :, :]
        if check_coincident:
            same = ~np.any(diff, axis=-1)
            local = np.arange(rows.stop - rows.start)
            same[local, local + rows.start] = False
            if same.any():
                i, j = np.argwhere(same)[0]
                pair = tuple(sorted((int(i) + rows.start, int(j))))
                raise SingularConfigurationError(
                    f"Particles {pair[0]} and {pair[1]} coincide under a singular kernel",
                    pair=pair,
                )
        return compensated_sum(evaluate(kernel, diff), axis=1) / n

    return map_row_blocks(block, n, n * d, workers=workers)


def rhs(config_: ParticleConfig, kernel: KernelSpec, workers: int = 1) -> np.ndarray:
    """
    v_i = (1/N) sum_(j != i) K(X_i - X_j), an N x d array.

    Each row is reduced in ascending j with compensated summation.
    """
    if kernel.dimension != config_.dim:
        raise ValidationError(
            f"Kernel dimension {kernel.dimension} does not match configuration dimension {config_.dim}",
            field="dimension",
        )
    return velocities(config_.positions, kernel, workers=workers)


# ─── Step size ──────────────────────────────────────────────────────

def _closest_pair(config_: ParticleConfig, workers: int = 1) -> tuple[float, tuple[int, int]]:
    indices, distances = nearest_neighbors(config_, 1, workers=workers)
    i = int(np.argmin(distances[:, 0]))
    j = int(indices[i, 0])
    return float(distances[i, 0]), (min(i, j), max(i, j))


def adaptive_dt(
    config_: ParticleConfig,
    kernel: KernelSpec,
    controls: IntegratorControls,
    c_k: Optional[float] = None,
    workers: int = 1,
) -> float:
    """
    dt = min(dt_max, eta * N * d_min^(alpha+1) / (2 C_K)).

    The relative speed of the closest pair is at most (2/N) C_K d_min^-alpha,
    so the pair moves at most eta * d_min per step. Singular kernels abort
    when d_min <= d_floor. Mollified kernels use max(d_min, eps).
    """
    d_min, pair = _closest_pair(config_, workers=workers)
    if kernel.is_singular:
        if d_min == 0:
            raise SingularConfigurationError(
                f"Particles {pair[0]} and {pair[1]} coincide under a singular kernel", pair=pair,
            )
        if d_min <= controls.d_floor:
            raise BlowUpError(
                f"d_min={d_min:.3e} reached the floor {controls.d_floor:.3e} at t={config_.time:.6g}",
                d_min=d_min,
                d_floor=controls.d_floor,
            )
    c_k = resolve_c_k(kernel) if c_k is None else c_k
    if c_k <= 0:
        return controls.dt_max
    scale = d_min
    if kernel.family is KernelFamily.MOLLIFIED:
        scale = max(d_min, kernel.epsilon)
    if scale == 0:
        return controls.dt_max
    dt = controls.eta * config_.n * scale ** (kernel.alpha + 1.0) / (2.0 * c_k)
    return min(controls.dt_max, dt)


# ─── Schemes ────────────────────────────────────────────────────────

def _step(positions: np.ndarray, dt: float, kernel: KernelSpec, scheme: str, workers: int) -> np.ndarray:
    def f(x):
        return velocities(x, kernel, workers=workers)

    k1 = f(positions)
    if scheme == "heun":
        k2 = f(positions + dt * k1)
        return positions + 0.5 * dt * (k1 + k2)
    k2 = f(positions + 0.5 * dt * k1)
    k3 = f(positions + 0.5 * dt * k2)
    k4 = f(positions + dt * k3)
    return positions + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def record_times(T: float, record_every: float) -> list[float]:
    """Multiples of ``record_every`` below T, then T itself."""
    count = int(math.floor(T / record_every * (1.0 + 1e-12)))
    times = [k * record_every for k in range(count + 1)]
    if T - times[-1] > _SNAP * T:
        times.append(T)
    else:
        times[-1] = T
    return times


def _diagnose(config_: ParticleConfig, kernel: KernelSpec, controls: IntegratorControls, workers: int):
    if not controls.record_diagnostics:
        return None
    delta = controls.diagnostic_delta or 0.0
    report = distance_report(config_, delta, workers=workers)
    if controls.diagnostic_delta:
        report.cutoff_value = cutoff_sum(config_, kernel.alpha + 1.0, delta, workers=workers).value
    return report


def simulate(
    config0: ParticleConfig,
    kernel: KernelSpec,
    T: float,
    controls: Optional[IntegratorControls] = None,
    workers: int = 1,
    seed: Optional[int] = None,
) -> Trajectory:
    """
    Integrate from ``config0`` to time T.

    Samples are recorded at multiples of ``controls.record_every`` and at T;
    steps are clipped so these times are hit exactly. Numerical aborts
    carry the trajectory up to the failure on ``exc.trajectory``.
    """
    controls = controls or IntegratorControls.from_defaults()
    if not (T > 0 and math.isfinite(T)):
        raise ValidationError(f"T must be finite and > 0 (got {T})", field="T")
    if kernel.dimension != config0.dim:
        raise ValidationError(
            f"Kernel dimension {kernel.dimension} does not match configuration dimension {config0.dim}",
            field="dimension",
        )

    trajectory = Trajectory(kernel=kernel, controls=controls, seed=seed)
    times = record_times(float(T), controls.record_every)
    start = ParticleConfig(config0.positions, 0.0)
    trajectory.record(start, _diagnose(start, kernel, controls, workers))

    t = 0.0
    try:
        d_min, _ = _closest_pair(start, workers=workers)
        c_k = resolve_c_k(kernel, d_min, max(d_min, start.bounding_diameter()))
        positions = np.array(start.positions)
        for target in times[1:]:
            while True:
                current = ParticleConfig(positions, t)
                dt = adaptive_dt(current, kernel, controls, c_k=c_k, workers=workers)
                hit = t + dt >= target - _SNAP * dt
                if hit:
                    dt = target - t
                positions = _step(positions, dt, kernel, controls.scheme, workers)
                if not np.all(np.isfinite(positions)):
                    raise BlowUpError(f"Non-finite positions after step at t={t:.6g}", d_floor=controls.d_floor)
                trajectory.step_log.append(dt)
                t = target if hit else t + dt
                if hit:
                    break
            sample = ParticleConfig(positions, t)
            trajectory.record(sample, _diagnose(sample, kernel, controls, workers))
    except NumericalError as exc:
        trajectory.status = "aborted"
        exc.trajectory = trajectory
        logger.warning("Integration aborted at t=%.6g after %d steps: %s", t, trajectory.n_steps, exc.message)
        raise

    logger.debug(
        "Integrated N=%d to T=%g in %d steps (dt_min=%.3e)",
        config0.n, T, trajectory.n_steps, min(trajectory.step_log),
    )
    return trajectory


def two_body_exact(r0: float, alpha: float, n: int, t: float) -> float:
    """
    Separation of a repulsive power-law pair inside an N-particle system:
    (r0^(alpha+1) + 2 (alpha+1) t / n)^(1/(alpha+1)).
    """
    if not r0 > 0:
        raise ValidationError(f"r0 must be > 0 (got {r0})", field="r0")
    if not t >= 0:
        raise ValidationError(f"t must be >= 0 (got {t})", field="t")
    if n < 1:
        raise ValidationError(f"n must be >= 1 (got {n})", field="n")
    power = alpha + 1.0
    return (r0 ** power + 2.0 * power * t / n) ** (1.0 / power)
