"""Overlap counts between permutation paths and the bounds that control them.

``f(n, k)`` counts paths sharing exactly ``k`` edges with the reference path
``0, 1, ..., n-1`` when the first and last steps are ignored; ``f1(n, k)``
counts over all ``n`` steps. Step ``i`` of a path coincides with step ``i`` of
the reference iff the path has visited exactly ``{0..i-1}`` before it and then
moves in direction ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import NamedTuple, Sequence

import numba as nb
import numpy as np

from ..core import DomainError, ResourceError, validate_dimension, validate_perm

__all__ = [
    "FNK_CAP",
    "FnkTable",
    "RegimeValue",
    "count_fnk",
    "ne",
    "fnk_bound_i",
    "fnk_bound_iii",
    "fnk_bound_iii_log",
    "fnk_bound_ii_log",
    "fnk_bracket_i",
    "shared_positions",
    "r_sequence",
    "g_of_r",
    "max_gap",
    "overlap_split",
]

FNK_CAP = 10


@dataclass(frozen=True)
class FnkTable:
    n: int
    f: tuple[int, ...]   # k = 0 .. n-2
    f1: tuple[int, ...]  # k = 0 .. n


class RegimeValue(NamedTuple):
    value: float
    in_regime: bool


@nb.njit(cache=True)
def _fnk_kernel(n):
    f = np.zeros(n - 1, dtype=np.int64)
    f1 = np.zeros(n + 1, dtype=np.int64)
    chosen = np.zeros(n, dtype=np.int64)
    nxt = np.zeros(n + 1, dtype=np.int64)
    shared = np.zeros(n + 1, dtype=np.int64)  # shared edges among steps < depth
    mask = 0
    depth = 0
    while True:
        if depth == n:
            total = shared[n]
            first = 1 if chosen[0] == 0 else 0
            # the last step of any path is shared iff its first n-1 steps are
            last = 1 if chosen[n - 1] == n - 1 else 0
            f1[total] += 1
            f[total - first - last] += 1
            depth -= 1
            mask ^= 1 << chosen[depth]
            nxt[depth] = chosen[depth] + 1
            continue
        v = nxt[depth]
        while v < n and (mask >> v) & 1:
            v += 1
        if v == n:
            if depth == 0:
                break
            depth -= 1
            mask ^= 1 << chosen[depth]
            nxt[depth] = chosen[depth] + 1
            continue
        hit = 1 if (v == depth and mask == (1 << depth) - 1) else 0
        chosen[depth] = v
        shared[depth + 1] = shared[depth] + hit
        mask |= 1 << v
        depth += 1
        nxt[depth] = 0
    return f, f1


def count_fnk(n: int) -> FnkTable:
    """Exact ``f(n, k)`` and ``f1(n, k)`` by enumerating all ``n!`` paths."""
    n = validate_dimension(n, 3)
    if n > FNK_CAP:
        raise ResourceError(f"count_fnk enumerates n! paths; n={n} exceeds the cap {FNK_CAP}")
    f, f1 = _fnk_kernel(n)
    return FnkTable(n, tuple(int(v) for v in f), tuple(int(v) for v in f1))


def ne(n: float) -> float:
    """Overlap threshold ``n - 5e (n + 3)**(2/3)``."""
    return n - 5.0 * math.e * (n + 3.0) ** (2.0 / 3.0)


def fnk_bound_i(n: int, k: int) -> int:
    """Leading term ``(k+1)(n-k-1)!`` of the small-overlap bound."""
    return (k + 1) * math.factorial(n - k - 1)


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n - 2:
        raise DomainError(f"k must lie in [1, n-2] = [1, {n - 2}], got {k}")


def fnk_bound_iii(n: int, k: int) -> int:
    """Worst-case count ``C(n-2, k) (n-k-1)! = (n-2)! (n-k-1) / k!``."""
    _check_k(n, k)
    return math.comb(n - 2, k) * math.factorial(n - k - 1)


def fnk_bound_iii_log(n: float, k: float) -> float:
    _check_k(n, k)
    return math.lgamma(n - 1) - math.lgamma(k + 1) + math.log(n - k - 1)


def fnk_bound_ii_log(n: float, k: float) -> RegimeValue:
    """``log(2 n**6 (n-k)!)``, flagged in-regime only when ``k + 2 <= ne(n)``."""
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in [0, n], got {k}")
    value = math.log(2.0) + 6.0 * math.log(n) + math.lgamma(n - k + 1)
    return RegimeValue(value, k + 2 <= ne(n))


def fnk_bracket_i(n: float, k: int) -> float:
    """``[(3k)**2 (n-2) / (n-4k)**3]**k``, the vanishing factor for small overlaps."""
    if k < 0 or 4 * k >= n:
        raise DomainError(f"need 0 <= 4k < n, got n={n}, k={k}")
    if k == 0:
        return 1.0
    log_base = 2.0 * math.log(3.0 * k) + math.log(n - 2.0) - 3.0 * math.log(n - 4.0 * k)
    return math.exp(k * log_base)


# --- r-sequences -----------------------------------------------------------
# Positions are 1-based step indices, as in the counting argument; only
# middle steps 2..n-1 can contribute.


def shared_positions(perm: Sequence[int], n: int) -> list[int]:
    """1-based middle steps at which ``perm`` shares an edge with the identity."""
    perm = validate_perm(perm, validate_dimension(n, 3))
    out = []
    mask = 0
    for i, v in enumerate(perm):
        if v == i and mask == (1 << i) - 1 and 0 < i < n - 1:
            out.append(i + 1)
        mask |= 1 << v
    return out


def r_sequence(perm: Sequence[int], n: int) -> tuple[int, ...]:
    """``(0, r_1, ..., r_k, n+1)`` for the shared middle edges of ``perm``."""
    return (0, *shared_positions(perm, n), n + 1)


def g_of_r(r: Sequence[int]) -> int:
    """``prod (s_i - 1)!`` over the gaps ``s_i = r_{i+1} - r_i``."""
    return math.prod(math.factorial(b - a - 1) for a, b in zip(r, r[1:]))


def max_gap(r: Sequence[int]) -> int:
    """``j(r) = max_i (s_i - 1)``."""
    return max(b - a - 1 for a, b in zip(r, r[1:]))


def overlap_split(n: int) -> dict[int, tuple[int, int]]:
    """Brute-force ``k -> (f_{j < n-4k}, f_{j >= n-4k})`` for ``k >= 1``.

    Pure Python enumeration; meant for the small ``n`` where the split can be
    checked against :func:`count_fnk`.
    """
    n = validate_dimension(n, 3)
    if n > 8:
        raise ResourceError("overlap_split is a pure-Python enumeration; use n <= 8")
    out: dict[int, list[int]] = {}
    for perm in permutations(range(n)):
        r = r_sequence(perm, n)
        k = len(r) - 2
        if k == 0:
            continue
        pair = out.setdefault(k, [0, 0])
        pair[0 if max_gap(r) < n - 4 * k else 1] += 1
    return {k: (a, b) for k, (a, b) in sorted(out.items())}
