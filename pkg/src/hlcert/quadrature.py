"""Midpoint Riemann sums on [0, 1/2] with a certified error bound.

For ``Phi`` on ``[0, 1/2]`` and ``N`` nodes at ``(n - 1/2) / (2N)``::

    |int Phi - M_N(Phi)| <= min(||Phi''|| / (192 N^2), ||Phi'|| / (16 N))

Only the first branch is used for planning step counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

__all__ = ["RiemannPlan", "pairwise_sum", "midpoint_nodes", "midpoint_sum", "error_bound", "plan_steps"]

INTERVAL = (0.0, 0.5)


@dataclass(frozen=True)
class RiemannPlan:
    N: int
    error_bound: float
    bound_source: str = "second_derivative"
    interval: tuple[float, float] = INTERVAL


def pairwise_sum(values) -> float:
    """Sum by a fixed binary tree: adjacent pairs, zero padding on odd levels."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        return 0.0
    while v.size > 1:
        if v.size % 2:
            v = np.append(v, 0.0)
        v = v[0::2] + v[1::2]
    return float(v[0])


def midpoint_nodes(N: int) -> np.ndarray:
    if N < 1:
        raise ValueError("N must be at least 1")
    return (np.arange(1, N + 1, dtype=float) - 0.5) / (2 * N)


def midpoint_sum(f: Callable[[np.ndarray], np.ndarray], N: int) -> float:
    """``(1/2N) sum_n f((n - 1/2)/(2N))``; ``f`` must accept a numpy array."""
    vals = np.broadcast_to(np.asarray(f(midpoint_nodes(N)), dtype=float), (N,))
    return pairwise_sum(vals) / (2 * N)


def error_bound(sup_f2: float, sup_f1: float | None, N: int) -> float:
    """The smaller of the two midpoint-rule bounds, rounded up by one ulp."""
    if sup_f2 < 0 or (sup_f1 is not None and sup_f1 < 0):
        raise ValueError("sup-norms must be non-negative")
    second = sup_f2 / (192 * N * N)
    first = math.inf if sup_f1 is None else sup_f1 / (16 * N)
    return math.nextafter(min(second, first), math.inf)


def plan_steps(sup_f2: float, eta: float) -> RiemannPlan:
    """Smallest N with ``sup_f2 / (192 N^2) < eta``, decided in exact rationals."""
    if sup_f2 <= 0 or eta <= 0:
        raise ValueError("sup_f2 and eta must be positive")
    s, e = Fraction(sup_f2), Fraction(eta)
    N = max(1, math.isqrt(int(s / (192 * e))))
    while N > 1 and s < e * 192 * (N - 1) ** 2:
        N -= 1
    while not s < e * 192 * N * N:
        N += 1
    return RiemannPlan(N=N, error_bound=error_bound(sup_f2, None, N))
