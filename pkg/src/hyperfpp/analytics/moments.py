"""First and second moments of the connecting-path count ``N^(1)``.

``N^(1)`` counts paths whose first direction lies in a set ``A``, whose last
direction lies in a disjoint set ``A'``, and whose middle steps weigh at most
``1 + eps/3``. Large-``n`` quantities are evaluated in natural logs; the
unspecified ``(1 + o(1))`` factors and the constant ``kappa`` are set to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from ..core import DomainError, ResourceError
from ..solver import enumerate_counts
from ..weights import derive_replica
from .counting import ne
from .gamma import log_gamma_tail

__all__ = [
    "BoundTermLog",
    "PZEstimate",
    "mean_connecting",
    "second_moment_terms",
    "empirical_pz_ratio",
    "connecting_counts",
]

PZ_CAP = 9


def mean_connecting(n: int, eps: float, size_a: int, size_b: int) -> float:
    """``log E N^(1) = log(|A| |A'| (n-2)! P(Gamma(n-2) <= 1 + eps/3))``."""
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if size_a < 1 or size_b < 1 or size_a + size_b > n:
        raise DomainError(f"need 1 <= |A|, |A'| and |A| + |A'| <= n, got {size_a}, {size_b}")
    return (
        math.log(size_a)
        + math.log(size_b)
        + math.lgamma(n - 1)
        + log_gamma_tail(n - 2, 1.0 + eps / 3.0)
    )


@dataclass(frozen=True)
class BoundTermLog:
    """Logs of the three vanishing contributions to ``Var N^(1) / (E N^(1))**2``.

    ``t1_log`` covers overlaps ``k <= n**(1/4)``, ``t2_log`` the moderate range
    up to ``ne(n) - 2`` and ``t3_log`` the near-total overlaps. ``t3_log`` is
    ``None`` while ``ne(n) <= 2``.
    """

    n: float
    eps: float
    c: float
    t1_log: float
    t2_log: float
    t3_log: Optional[float]


def second_moment_terms(n: float, eps: float, c: float) -> BoundTermLog:
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if not 0 < c < 1:
        raise DomainError(f"c must lie in (0, 1), got {c}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    log_n = math.log(n)
    lead = math.log(12.0 / (c * c * eps))
    log_q = math.log1p(eps / 3.0)
    t1 = lead - 0.75 * log_n
    t2 = lead + 6.0 * log_n - n**0.25 * log_q
    m = ne(n)
    t3 = None
    if m > 2:
        # n ln n - m ln(m q) = (n - m) ln n - m ln(m / n) - m ln q, which avoids
        # subtracting two numbers of size n ln n
        t3 = (n - m) * log_n - m * math.log1p((m - n) / n) - m * log_q
    return BoundTermLog(float(n), eps, c, t1, t2, t3)


@dataclass(frozen=True)
class PZEstimate:
    mean: float
    second_moment: float
    pz_lower_bound: float
    hit_rate: float
    mean_sigma: float
    hit_rate_sigma: float
    streams: int


def connecting_counts(
    n: int, eps: float, first: Iterable[int], last: Iterable[int], streams: int, seed: int
) -> np.ndarray:
    """``N^(1)`` for replicas ``0..streams-1`` of ``seed``."""
    first, last = list(first), list(last)
    x = 1.0 + eps / 3.0
    return np.array(
        [enumerate_counts(n, derive_replica(seed, r), x, first, last) for r in range(streams)],
        dtype=np.float64,
    )


def empirical_pz_ratio(
    n: int, eps: float, first: Iterable[int], last: Iterable[int], streams: int, seed: int = 0
) -> PZEstimate:
    """Monte Carlo moments of ``N^(1)`` and the Paley-Zygmund ratio ``(E N)**2 / E N**2``."""
    if n > PZ_CAP:
        raise ResourceError(f"empirical_pz_ratio enumerates paths; n={n} exceeds the cap {PZ_CAP}")
    if streams < 2:
        raise DomainError("need at least two streams")
    counts = connecting_counts(n, eps, first, last, streams, seed)
    mean = float(counts.mean())
    second = float(np.mean(counts**2))
    hits = float(np.mean(counts > 0))
    ratio = mean * mean / second if second > 0 else math.nan
    return PZEstimate(
        mean=mean,
        second_moment=second,
        pz_lower_bound=ratio,
        hit_rate=hits,
        mean_sigma=float(counts.std(ddof=1) / math.sqrt(streams)),
        hit_rate_sigma=math.sqrt(hits * (1.0 - hits) / streams),
        streams=streams,
    )
