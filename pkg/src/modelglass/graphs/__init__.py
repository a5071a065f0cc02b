"""Stability combinatorics on finite graphs."""

from .graph import Graph, load_graph
from .halfgraph import HalfGraphWitness, find_half_graph, order_property
from .ramsey import max_homogeneous, stable_ramsey_report
from .regularity import (
    NotStable,
    PartitionCertificate,
    edge_density,
    regular_pair_exact,
    regular_pair_sampled,
    stable_regularity,
)

__all__ = [
    "Graph",
    "HalfGraphWitness",
    "NotStable",
    "PartitionCertificate",
    "edge_density",
    "find_half_graph",
    "load_graph",
    "max_homogeneous",
    "order_property",
    "regular_pair_exact",
    "regular_pair_sampled",
    "stable_ramsey_report",
    "stable_regularity",
]
