"""
Analytic tail bounds.

The constants of the probability estimates are not explicit. Each bound
is written as a function of (C, N, d, parameters); ``fit_constant``
solves for the C that reproduces the estimate at the smallest N, and the
bound is then evaluated at the larger N for trend comparison.
"""

import logging
import math
from typing import Callable

import numpy as np
from scipy.optimize import brentq

logger = logging.getLogger(__name__)

Bound = Callable[..., float]

_MAX_CONSTANT = 1e300


def pair_tail_bound(c: float, n: int, d: int, L: float) -> float:
    """1 - exp(-C / L^d); uniform in N."""
    return -math.expm1(-c / L ** d)


def triple_pair_bound(c: float, n: int, d: int, l1: float, l2: float) -> float:
    """C N^3 L1^d L2^d."""
    return c * float(n) ** 3 * l1 ** d * l2 ** d


def dmin1_tail_bound(c: float, n: int, d: int, L: float) -> float:
    """Triple bound at L1 = L2 = L^-1 N^(-3/(2d)), i.e. C L^(-2d)."""
    radius = n ** (-1.5 / d) / L
    return triple_pair_bound(c, n, d, radius, radius)


def triple_event_bound(c: float, n: int, d: int, beta: float, eps: float, delta: float) -> float:
    """
    C N^(-d eps) + C N^(3 - d(1 - eps)) g, with g = delta^(d(1-beta)) for
    beta < 1, log N + |log delta| for beta = 1 and N^(-(2/d + eps) d (1-beta))
    for beta > 1.
    """
    if beta < 1:
        regime = delta ** (d * (1.0 - beta))
    elif beta == 1:
        regime = math.log(n) + abs(math.log(delta))
    else:
        regime = float(n) ** ((-2.0 / d - eps) * d * (1.0 - beta))
    return c * (float(n) ** (-d * eps) + float(n) ** (3.0 - d * (1.0 - eps)) * regime)


def close_pairs_bound(c: float, n: int, d: int, delta: float, theta: float) -> float:
    """2 ((1/(1-theta)) (C (1-theta) delta^d / theta)^theta)^N."""
    if c <= 0 or delta <= 0:
        return 0.0
    log_base = -math.log(1.0 - theta) + theta * math.log(c * (1.0 - theta) * delta ** d / theta)
    with np.errstate(over="ignore"):
        return float(2.0 * np.exp(n * log_base))


def fit_constant(bound: Bound, target: float, n: int, d: int, **params) -> float:
    """
    Smallest C >= 0 with bound(C, n) = target. Returns 0 for a zero
    target and inf when the bound cannot reach it.
    """
    if target <= 0:
        return 0.0
    hi = 1.0
    while bound(hi, n, d, **params) < target:
        hi *= 10.0
        if hi > _MAX_CONSTANT:
            logger.debug("Bound never reaches %.3g at N=%d", target, n)
            return math.inf
    return float(brentq(lambda c: bound(c, n, d, **params) - target, 0.0, hi, xtol=1e-14 * hi, rtol=1e-12))
