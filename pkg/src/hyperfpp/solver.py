"""Exact oriented first-passage percolation on the hypercube.

The minimal path weight satisfies the subset recurrence

    d(0) = 0,   d(S) = min_{v in S} d(S - v) + w(S - v, v)

and ``m_n = d(2**n - 1)``. Masks are relaxed in increasing numeric order,
which is a topological order of the subset lattice. Weights are generated on
demand from the stream key, so memory is one float64 and one uint8 per mask.

Every kernel accumulates a path's weight left to right starting from 0.0.
Because floating-point addition is monotone in each argument, the DP and the
brute-force enumeration in this module return bit-identical minima.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numba as nb
import numpy as np

from .core import DomainError, ResourceError, path_edges, validate_dimension
from .weights import WeightStream, _uniform, derive_replica, edge_weights, weight_kernel

__all__ = [
    "DEFAULT_CAP",
    "ENUM_CAP",
    "FppResult",
    "dimension_cap",
    "weight_table",
    "min_path",
    "min_middle",
    "enumerate_min",
    "enumerate_middle_min",
    "enumerate_counts",
    "sample_min",
    "path_weight",
]

DEFAULT_CAP = 24
ENUM_CAP = 11

Weights = Union[WeightStream, np.ndarray]

_EMPTY = np.empty(0, dtype=np.float64)
_NO_SET = np.zeros(0, dtype=np.bool_)


def dimension_cap() -> int:
    """DP dimension cap, overridable through ``HYPERFPP_CAP``."""
    raw = os.environ.get("HYPERFPP_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise DomainError(f"HYPERFPP_CAP must be an integer, got {raw!r}") from None
    if cap < 2:
        raise DomainError(f"HYPERFPP_CAP must be >= 2, got {cap}")
    return cap


@dataclass(frozen=True)
class FppResult:
    min_weight: float
    argmin: tuple[int, ...]


def _unpack(weights: Weights, n: int) -> tuple[np.uint64, np.ndarray]:
    # A dense table indexed by edge id replaces the stream (test hook).
    if isinstance(weights, WeightStream):
        return np.uint64(weights.key), _EMPTY
    table = np.ascontiguousarray(weights, dtype=np.float64)
    if table.ndim != 1 or table.shape[0] != n << n:
        raise DomainError(f"weight table must have length n * 2**n = {n << n}")
    if not np.all(table > 0):
        raise DomainError("edge weights must be strictly positive")
    return np.uint64(0), table


def weight_table(n: int, stream: WeightStream) -> np.ndarray:
    """Dense copy of a stream's weights indexed by edge id; invalid ids hold NaN."""
    validate_dimension(n)
    ids = np.arange(n << n, dtype=np.uint64)
    table = edge_weights(stream, ids)
    tails = np.arange(n << n) // n
    dirs = np.arange(n << n) % n
    table[(tails >> dirs) & 1 == 1] = np.nan
    return table


@nb.njit(inline="always")
def _w(key, table, n, tail, v):
    if table.shape[0] > 0:
        return table[tail * n + v]
    return weight_kernel(key, np.uint64(tail) * np.uint64(n) + np.uint64(v))


# de Bruijn lookup: index of the single set bit of a 32-bit power of two
_DEBRUIJN = np.array(
    [0, 1, 28, 2, 29, 14, 24, 3, 30, 22, 20, 15, 25, 17, 4, 8,
     31, 27, 13, 23, 21, 19, 16, 7, 26, 12, 18, 6, 11, 5, 10, 9],
    dtype=np.int64,
)


@nb.njit(inline="always")
def _bit_index(low):
    return _DEBRUIJN[((low * 0x077CB531) & 0xFFFFFFFF) >> 27]


@nb.njit(cache=True, nogil=True)
def _dp_full(n, key, table):
    size = 1 << n
    d = np.empty(size, dtype=np.float64)
    back = np.zeros(size, dtype=np.uint8)
    d[0] = 0.0
    for s in range(1, size):
        best = np.inf
        bv = 0
        t = s
        while t:
            low = t & -t
            t ^= low
            v = _bit_index(low)
            prev = s ^ low
            c = d[prev] + _w(key, table, n, prev, v)
            # ties keep the lowest direction, matching a scan over range(n)
            if c < best:
                best = c
                bv = v
        d[s] = best
        back[s] = bv
    return d[size - 1], back


@nb.njit(cache=True, nogil=True)
def _dp_below(n, key, table, cutoff, d, back, order):
    # Forward relaxation restricted to masks reachable with weight <= cutoff.
    # ``d`` must be all-inf on entry and is restored before returning.
    # ``order`` lists touched masks; layers are contiguous because every
    # mask is appended while its popcount predecessor layer is scanned.
    full = (1 << n) - 1
    d[0] = 0.0
    order[0] = 0
    head = 0
    tail = 1
    stream = table.shape[0] == 0
    nn = np.uint64(n)
    while head < tail:
        s = order[head]
        head += 1
        ds = d[s]
        # -log(u) <= cutoff - ds needs u >= exp(ds - cutoff); the margin keeps
        # the cheap uniform test conservative, the exact test follows
        u_min = np.exp(ds - cutoff) * (1.0 - 1e-9)
        for v in range(n):
            if (s >> v) & 1:
                continue
            if stream:
                u = _uniform(key, np.uint64(s) * nn + np.uint64(v))
                if u < u_min:
                    continue
                c = ds + -np.log(u)
            else:
                c = ds + table[s * n + v]
            if c <= cutoff:
                t = s | (1 << v)
                if d[t] == np.inf:
                    order[tail] = t
                    tail += 1
                    d[t] = c
                    back[t] = v
                elif c < d[t]:
                    d[t] = c
                    back[t] = v
    result = d[full]
    for i in range(tail):
        d[order[i]] = np.inf
    return result


@nb.njit(cache=True, nogil=True)
def _batch_below(n, keys, cutoff, out):
    size = 1 << n
    d = np.full(size, np.inf)
    back = np.zeros(size, dtype=np.uint8)
    order = np.empty(size, dtype=np.int64)
    no_table = np.empty(0, dtype=np.float64)
    for i in range(keys.shape[0]):
        out[i] = _dp_below(n, keys[i], no_table, cutoff, d, back, order)


@nb.njit(cache=True, nogil=True)
def _dp_middle(n, key, table, a, b):
    size = 1 << n
    start = 1 << a
    target = (size - 1) ^ (1 << b)
    d = np.full(size, np.inf)
    d[start] = 0.0
    bit_b = 1 << b
    for s in range(start + 1, target + 1):
        if not (s & start) or (s & bit_b):
            continue
        best = np.inf
        t = s ^ start
        while t:
            low = t & -t
            t ^= low
            prev = s ^ low
            c = d[prev] + _w(key, table, n, prev, _bit_index(low))
            if c < best:
                best = c
        d[s] = best
    return d[target]


@nb.njit(cache=True, nogil=True)
def _enumerate(n, key, table, x, in_a, in_b, constrained):
    """Depth-first walk over all permutations.

    Returns (count of leaves with weight <= x, minimal leaf weight, argmin).
    Prefixes heavier than ``x`` are pruned, so the minimum is exact only when
    it does not exceed ``x``; pass ``x = inf`` for the exhaustive oracle.
    When ``constrained`` the first direction must lie in ``in_a``, the last in
    ``in_b``, and only steps 2..n-1 contribute to the weight.
    """
    chosen = np.zeros(n, dtype=np.int64)
    nxt = np.zeros(n + 1, dtype=np.int64)
    psum = np.zeros(n + 1, dtype=np.float64)
    best = np.inf
    best_perm = np.zeros(n, dtype=np.int64)
    count = 0
    mask = 0
    depth = 0
    while True:
        if depth == n:
            total = psum[n]
            if total <= x:
                count += 1
            if total < best:
                best = total
                best_perm[:] = chosen
            depth -= 1
            mask ^= 1 << chosen[depth]
            nxt[depth] = chosen[depth] + 1
            continue
        v = nxt[depth]
        while v < n:
            if not (mask >> v) & 1:
                if not constrained:
                    break
                if depth == 0:
                    if in_a[v]:
                        break
                elif depth == n - 1:
                    if in_b[v]:
                        break
                else:
                    break
            v += 1
        if v == n:
            if depth == 0:
                break
            depth -= 1
            mask ^= 1 << chosen[depth]
            nxt[depth] = chosen[depth] + 1
            continue
        if constrained and (depth == 0 or depth == n - 1):
            step = psum[depth]
        else:
            step = psum[depth] + _w(key, table, n, mask, v)
        if step > x:
            # weights are positive, so no completion of this prefix can count
            nxt[depth] = v + 1
            continue
        chosen[depth] = v
        psum[depth + 1] = step
        mask |= 1 << v
        depth += 1
        nxt[depth] = 0
    return count, best, best_perm


def _check_cap(n: int, cap: Optional[int]) -> None:
    cap = dimension_cap() if cap is None else cap
    if n > cap:
        need = (1 << n) * 9
        raise ResourceError(
            f"n={n} exceeds the DP cap {cap}; it needs about {need / 2**20:.0f} MiB "
            "(raise the cap with HYPERFPP_CAP)"
        )


def _backtrack(back: np.ndarray, n: int) -> tuple[int, ...]:
    s = (1 << n) - 1
    perm = []
    for _ in range(n):
        v = int(back[s])
        perm.append(v)
        s ^= 1 << v
    return tuple(reversed(perm))


def path_weight(perm: Iterable[int], n: int, weights: Weights) -> float:
    """Weight of one path, summed left to right."""
    key, table = _unpack(weights, n)
    total = 0.0
    for e in path_edges(list(perm), n):
        if table.shape[0]:
            total += float(table[e.tail * n + e.dir])
        else:
            total += float(weight_kernel(key, np.uint64(e.tail * n + e.dir)))
    return total


def min_path(
    n: int, weights: Weights, *, cap: Optional[int] = None, cutoff: Optional[float] = None
) -> Optional[FppResult]:
    """Minimal weight over all ``n!`` monotone paths and a minimising path.

    With ``cutoff`` only masks reachable at weight ``<= cutoff`` are expanded;
    the result is exact when ``m_n <= cutoff`` and ``None`` otherwise.
    """
    n = validate_dimension(n)
    _check_cap(n, cap)
    key, table = _unpack(weights, n)
    if cutoff is None:
        value, back = _dp_full(n, key, table)
    else:
        size = 1 << n
        back = np.zeros(size, dtype=np.uint8)
        value = _dp_below(
            n, key, table, float(cutoff), np.full(size, np.inf), back,
            np.empty(size, dtype=np.int64),
        )
        if value == np.inf:
            return None
    return FppResult(float(value), _backtrack(back, n))


def _middle_args(n: int, a: int, b: int) -> None:
    if not (0 <= a < n and 0 <= b < n):
        raise DomainError(f"boundary directions must lie in [0, {n}), got {a}, {b}")
    if a == b:
        raise DomainError("first and last direction must differ")


def min_middle(n: int, a: int, b: int, weights: Weights, *, cap: Optional[int] = None) -> float:
    """Minimal middle-step weight over paths starting with ``a`` and ending with ``b``."""
    n = validate_dimension(n)
    _middle_args(n, a, b)
    _check_cap(n, cap)
    if n == 2:
        return 0.0
    key, table = _unpack(weights, n)
    return float(_dp_middle(n, key, table, a, b))


def _check_enum(n: int) -> None:
    if n > ENUM_CAP:
        raise ResourceError(f"enumeration over {n}! paths exceeds the cap n <= {ENUM_CAP}")


def enumerate_min(n: int, weights: Weights) -> FppResult:
    """Brute-force minimum over every permutation path (oracle for :func:`min_path`)."""
    n = validate_dimension(n)
    _check_enum(n)
    key, table = _unpack(weights, n)
    _, best, perm = _enumerate(n, key, table, np.inf, _NO_SET, _NO_SET, False)
    return FppResult(float(best), tuple(int(p) for p in perm))


def _membership(n: int, coords: Iterable[int]) -> np.ndarray:
    out = np.zeros(n, dtype=np.bool_)
    for c in coords:
        if not 0 <= c < n:
            raise DomainError(f"coordinate {c} out of range for n={n}")
        out[c] = True
    return out


def enumerate_middle_min(n: int, a: int, b: int, weights: Weights) -> float:
    """Brute-force counterpart of :func:`min_middle` over ``(n-2)!`` paths."""
    n = validate_dimension(n)
    _middle_args(n, a, b)
    _check_enum(n)
    key, table = _unpack(weights, n)
    _, best, _ = _enumerate(n, key, table, np.inf, _membership(n, [a]), _membership(n, [b]), True)
    return float(best)


def enumerate_counts(
    n: int,
    weights: Weights,
    x: float,
    first: Optional[Iterable[int]] = None,
    last: Optional[Iterable[int]] = None,
) -> int:
    """Count paths of weight at most ``x``.

    Without boundary sets this is ``#{pi : X_pi <= x}``. With ``first`` and
    ``last`` only paths with ``pi[0] in first`` and ``pi[-1] in last`` count,
    and only the middle steps are weighed.
    """
    n = validate_dimension(n)
    _check_enum(n)
    if x != x:
        raise DomainError("threshold must not be NaN")
    key, table = _unpack(weights, n)
    if (first is None) != (last is None):
        raise DomainError("give both boundary sets or neither")
    if first is None:
        count, _, _ = _enumerate(n, key, table, float(x), _NO_SET, _NO_SET, False)
        return int(count)
    in_a, in_b = _membership(n, first), _membership(n, last)
    if np.any(in_a & in_b):
        raise DomainError("boundary sets must be disjoint")
    count, _, _ = _enumerate(n, key, table, float(x), in_a, in_b, True)
    return int(count)


def _replica_keys(seed: int, start: int, stop: int) -> np.ndarray:
    return np.array([derive_replica(seed, r).key for r in range(start, stop)], dtype=np.uint64)


def sample_min(
    n: int,
    seed: int,
    reps: int,
    parallelism: int = 1,
    *,
    cutoff: Optional[float] = None,
    cap: Optional[int] = None,
) -> np.ndarray:
    """``m_n`` for replicas ``0..reps-1`` of ``seed``, in replica order.

    With ``cutoff`` entries above the cutoff are reported as ``inf``; the
    remaining entries are exact. The output does not depend on ``parallelism``.
    """
    n = validate_dimension(n)
    if reps < 1:
        raise DomainError(f"reps must be >= 1, got {reps}")
    if parallelism < 1:
        raise DomainError(f"parallelism must be >= 1, got {parallelism}")
    _check_cap(n, cap)
    out = np.empty(reps, dtype=np.float64)

    if cutoff is None:
        def task(r: int) -> None:
            out[r] = _dp_full(n, np.uint64(derive_replica(seed, r).key), _EMPTY)[0]

        units: list = list(range(reps))
    else:
        chunk = max(1, math.ceil(reps / (4 * parallelism)))
        units = [(lo, min(reps, lo + chunk)) for lo in range(0, reps, chunk)]

        def task(span) -> None:
            lo, hi = span
            _batch_below(n, _replica_keys(seed, lo, hi), float(cutoff), out[lo:hi])

    if parallelism == 1:
        for u in units:
            task(u)
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            list(pool.map(task, units))
    return out
