"""Hypercube geometry: vertex masks, upward edges and permutation paths.

Coordinates are 0-based. A vertex of ``{0,1}^n`` is an integer mask whose bit
``j`` is set iff coordinate ``j`` equals 1. A monotone path from the all-zero
vertex to the all-one vertex is a permutation of ``range(n)``; step ``i``
flips coordinate ``perm[i]``.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

__all__ = [
    "DomainError",
    "ResourceError",
    "OrientedEdge",
    "validate_dimension",
    "validate_perm",
    "edge_id",
    "edge_from_id",
    "path_edges",
    "path_edge_ids",
    "shared_middle_edges",
    "shared_total_edges",
    "prefix_blocks",
]


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class ResourceError(RuntimeError):
    """Requested problem size exceeds a configured memory or time cap."""


class OrientedEdge(NamedTuple):
    tail: int
    dir: int

    def head(self) -> int:
        return self.tail | (1 << self.dir)

    def id(self, n: int) -> int:
        return edge_id(self.tail, self.dir, n)


def validate_dimension(n: int, minimum: int = 2) -> int:
    if int(n) != n or n < minimum:
        raise DomainError(f"dimension must be an integer >= {minimum}, got {n!r}")
    return int(n)


def validate_perm(perm: Sequence[int], n: int) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise DomainError(f"{perm!r} is not a permutation of range({n})")
    return perm


def edge_id(tail: int, direction: int, n: int) -> int:
    """Stable integer index ``tail * n + dir`` of an upward edge."""
    if not 0 <= direction < n:
        raise DomainError(f"direction {direction} out of range for n={n}")
    if tail >> direction & 1:
        raise DomainError(f"edge ({tail:b}, {direction}) does not point upward")
    return tail * n + direction


def edge_from_id(eid: int, n: int) -> OrientedEdge:
    tail, direction = divmod(eid, n)
    return OrientedEdge(tail, direction)


def path_edges(perm: Sequence[int], n: int) -> list[OrientedEdge]:
    """Edges traversed by ``perm``; edge ``i`` leaves the mask of ``perm[:i]``."""
    perm = validate_perm(perm, validate_dimension(n))
    edges = []
    mask = 0
    for d in perm:
        edges.append(OrientedEdge(mask, d))
        mask |= 1 << d
    return edges


def path_edge_ids(perm: Sequence[int], n: int) -> list[int]:
    return [e.id(n) for e in path_edges(perm, n)]


def _shared_positions(perm: Sequence[int], other: Sequence[int], n: int) -> list[bool]:
    # Two edges coincide iff they share tail mask and direction; an equal tail
    # mask forces the same step index, so a positional comparison suffices.
    a = path_edges(perm, n)
    b = path_edges(other, n)
    return [x == y for x, y in zip(a, b)]


def shared_middle_edges(perm: Sequence[int], other: Sequence[int], n: int) -> int:
    """Number of edges shared by two paths, first and last steps excluded."""
    validate_dimension(n, 3)
    return sum(_shared_positions(perm, other, n)[1:-1])


def shared_total_edges(perm: Sequence[int], other: Sequence[int], n: int) -> int:
    """Number of edges shared by two paths over all ``n`` steps."""
    return sum(_shared_positions(perm, other, n))


def prefix_blocks(n: int, c: float) -> tuple[frozenset[int], frozenset[int]]:
    """Default boundary sets: the first and last ``ceil(c*n)`` coordinates."""
    if not 0 < c < 1:
        raise DomainError(f"c must lie in (0, 1), got {c}")
    size = math.ceil(c * n)
    if 2 * size > n:
        raise DomainError(f"blocks of size {size} overlap for n={n}")
    return frozenset(range(size)), frozenset(range(n - size, n))
