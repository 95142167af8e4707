"""Monte Carlo checks driven by the counter-based weight streams.

Where no hypercube edge is involved, edge ids are used as plain counters:
draw ``j`` of trial ``t`` takes id ``t * width + j``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ..core import DomainError
from ..weights import WeightStream, derive_replica, edge_weights
from .gamma import gamma_lower_cdf

__all__ = [
    "MCCheck",
    "GoodEdgeStats",
    "joint_tail_check",
    "good_edge_probability",
    "good_edge_stats",
    "independent_min_sample",
]

_CHUNK = 1 << 20


class MCCheck(NamedTuple):
    estimate: float
    bound: float
    sigma: float


class GoodEdgeStats(NamedTuple):
    fraction_mean: float
    p_analytic: float
    sigma: float


def _block(stream: WeightStream, start: int, rows: int, width: int) -> np.ndarray:
    ids = np.arange(start * width, (start + rows) * width, dtype=np.uint64)
    return edge_weights(stream, ids).reshape(rows, width)


def joint_tail_check(n: int, k: int, x: float, trials: int, stream: WeightStream) -> MCCheck:
    """Estimate ``P(X_n <= x, X'_n <= x)`` for sums sharing exactly ``k`` terms.

    The shared exponentials are literally the same draws. The bound is
    ``P(X_n <= x) P(X_{n-k} <= x)``.
    """
    if n < 1 or not 0 <= k <= n:
        raise DomainError(f"need n >= 1 and 0 <= k <= n, got n={n}, k={k}")
    if trials < 1:
        raise DomainError("trials must be positive")
    width = 2 * n - k
    hits = 0
    for lo in range(0, trials, _CHUNK // width):
        rows = min(_CHUNK // width, trials - lo)
        w = _block(stream, lo, rows, width)
        own = w[:, :n].sum(axis=1)
        other = w[:, :k].sum(axis=1) + w[:, n:].sum(axis=1)
        hits += int(np.count_nonzero((own <= x) & (other <= x)))
    p = hits / trials
    bound = gamma_lower_cdf(n, x).cdf * gamma_lower_cdf(n - k, x).cdf
    return MCCheck(p, bound, math.sqrt(p * (1.0 - p) / trials))


def good_edge_probability(t: float) -> float:
    """``P(xi <= t) P(xi > t)`` for a mean-one exponential."""
    if t <= 0:
        raise DomainError(f"threshold must be positive, got {t}")
    return -math.expm1(-t) * math.exp(-t)


def good_edge_stats(n: int, t: float, reps: int, seed: int) -> GoodEdgeStats:
    """Mean over replicas of ``|A0 \\ A1| / n``.

    ``A0`` holds directions whose edge out of the origin weighs at most ``t``,
    ``A1`` those whose edge into the all-ones vertex does. For ``n <= 58`` the
    actual hypercube edge ids are used; beyond that ids ``0..2n-1`` stand in.
    """
    p = good_edge_probability(t)
    if n < 1 or reps < 1:
        raise DomainError("n and reps must be positive")
    dirs = np.arange(n, dtype=np.uint64)
    if n <= 58:
        full = (1 << n) - 1
        bottom = dirs
        top = (np.uint64(full) ^ (np.uint64(1) << dirs)) * np.uint64(n) + dirs
    else:
        bottom, top = dirs, dirs + np.uint64(n)
    fractions = np.empty(reps)
    for r in range(reps):
        stream = derive_replica(seed, r)
        good0 = edge_weights(stream, bottom) <= t
        good1 = edge_weights(stream, top) <= t
        fractions[r] = np.count_nonzero(good0 & ~good1) / n
    sigma = math.sqrt(p * (1.0 - p) / (n * reps))
    return GoodEdgeStats(float(fractions.mean()), p, sigma)


def independent_min_sample(n: int, trials: int, seed: int) -> np.ndarray:
    """Minima of ``n!`` independent Gamma(n, 1) sums, one per trial."""
    if n < 1 or n > 8:
        raise DomainError("independent_min_sample materialises n! sums; use 1 <= n <= 8")
    paths = math.factorial(n)
    stream = derive_replica(seed, 0)
    out = np.empty(trials)
    per_chunk = max(1, _CHUNK // (paths * n))
    for lo in range(0, trials, per_chunk):
        rows = min(per_chunk, trials - lo)
        w = _block(stream, lo, rows, paths * n).reshape(rows, paths, n)
        out[lo:lo + rows] = w.sum(axis=2).min(axis=1)
    return out
