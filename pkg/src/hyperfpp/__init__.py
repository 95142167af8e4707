"""Oriented first-passage percolation on the hypercube: exact solvers and checks."""

__version__ = "0.1.0"

from .core import DomainError, OrientedEdge, ResourceError, path_edges, shared_middle_edges, shared_total_edges
from .solver import FppResult, enumerate_counts, enumerate_min, min_middle, min_path, sample_min
from .weights import WeightStream, derive_replica, edge_weight, edge_weights

__all__ = [
    "DomainError",
    "ResourceError",
    "OrientedEdge",
    "path_edges",
    "shared_middle_edges",
    "shared_total_edges",
    "FppResult",
    "min_path",
    "min_middle",
    "enumerate_min",
    "enumerate_counts",
    "sample_min",
    "WeightStream",
    "derive_replica",
    "edge_weight",
    "edge_weights",
]
