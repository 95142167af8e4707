"""Stateless Exp(1) edge weights keyed by ``(seed, replica, edge_id)``.

Every weight is a pure function of its key, so a hypercube of dimension 24
never needs its ``24 * 2**23`` weights in memory and replicas can be computed
in any order. The bit pipeline is pinned; changing any constant changes every
emitted number.

    key = seed ^ (replica * 0x9E3779B97F4A7C15)
    z   = mix64(key ^ (edge_id * 0xD6E8FEB86659FD93))
    u   = ((z >> 11) + 0.5) * 2**-53
    w   = -log(u)

``mix64`` is the splitmix64 finalizer. All arithmetic is modulo 2**64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

__all__ = [
    "WeightStream",
    "derive_replica",
    "edge_weight",
    "edge_weights",
    "edge_uniforms",
    "stream_key",
]

MASK64 = (1 << 64) - 1
REPLICA_MULT = 0x9E3779B97F4A7C15
EDGE_MULT = 0xD6E8FEB86659FD93

_REPLICA_MULT = np.uint64(REPLICA_MULT)
_EDGE_MULT = np.uint64(EDGE_MULT)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S11 = np.uint64(11)
_S27 = np.uint64(27)
_S30 = np.uint64(30)
_S31 = np.uint64(31)
_TWO_M53 = 2.0**-53


def stream_key(seed: int, replica: int) -> int:
    return (seed ^ (replica * REPLICA_MULT)) & MASK64


@dataclass(frozen=True)
class WeightStream:
    """One i.i.d. family of edge weights; equal fields give equal weights."""

    seed: int
    replica: int = 0

    def __post_init__(self):
        for name in ("seed", "replica"):
            v = getattr(self, name)
            if int(v) != v or not 0 <= v <= MASK64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v!r}")

    @property
    def key(self) -> int:
        return stream_key(self.seed, self.replica)


def derive_replica(seed: int, replica: int) -> WeightStream:
    return WeightStream(seed & MASK64, replica & MASK64)


@nb.njit(inline="always")
def _mix(key, eid):
    z = key ^ (eid * _EDGE_MULT)
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@nb.njit(inline="always")
def _uniform(key, eid):
    return (np.float64(_mix(key, eid) >> _S11) + 0.5) * _TWO_M53


@nb.njit(inline="always")
def weight_kernel(key, eid):
    """Exp(1) weight of edge ``eid`` under stream ``key`` (both uint64)."""
    return -np.log(_uniform(key, eid))


@nb.njit(cache=True, nogil=True)
def _fill_weights(key, ids, out):
    for i in range(ids.shape[0]):
        out[i] = weight_kernel(key, ids[i])


@nb.njit(cache=True, nogil=True)
def _fill_uniforms(key, ids, out):
    for i in range(ids.shape[0]):
        out[i] = _uniform(key, ids[i])


def _as_ids(ids) -> np.ndarray:
    arr = np.asarray(ids)
    if arr.dtype != np.uint64:
        if np.any(arr < 0):
            raise ValueError("edge ids must be non-negative")
        arr = arr.astype(np.uint64)
    return np.ascontiguousarray(arr).ravel()


def edge_weights(stream: WeightStream, ids) -> np.ndarray:
    """Vectorised :func:`edge_weight` over an array of edge ids."""
    flat = _as_ids(ids)
    out = np.empty(flat.shape[0], dtype=np.float64)
    _fill_weights(np.uint64(stream.key), flat, out)
    return out.reshape(np.shape(ids))


def edge_uniforms(stream: WeightStream, ids) -> np.ndarray:
    """The underlying uniforms in ``(0, 1)``, exposed for diagnostics."""
    flat = _as_ids(ids)
    out = np.empty(flat.shape[0], dtype=np.float64)
    _fill_uniforms(np.uint64(stream.key), flat, out)
    return out.reshape(np.shape(ids))


def edge_weight(stream: WeightStream, eid: int) -> float:
    return float(edge_weights(stream, np.array([eid], dtype=np.uint64))[0])
