"""RANKING randomized greedy matching and exhaustive checks of its k-WIS analysis."""

__version__ = "0.1.0"

from .blossom import brute_force_maximum, has_perfect_matching, maximum_matching
from .graph import (
    AugDecomposition,
    Graph,
    Matching,
    Permutation,
    parse_graph,
    serialize_graph,
    symmetric_difference,
    validate_matching,
)
from .ranking import edge_greedy_run, exhaustive_stats, mrg_run, ranking_run, sample_ranking

__all__ = [
    "AugDecomposition",
    "Graph",
    "Matching",
    "Permutation",
    "brute_force_maximum",
    "edge_greedy_run",
    "exhaustive_stats",
    "has_perfect_matching",
    "maximum_matching",
    "mrg_run",
    "parse_graph",
    "ranking_run",
    "sample_ranking",
    "serialize_graph",
    "symmetric_difference",
    "validate_matching",
]
