"""Balanced minimum evolution: models, bounds, solvers, and instance tools."""

from __future__ import annotations

from .approx import ApproxReport, approximate, minimum_spanning_tree, round_to_cubic, split_vertex
from .exact import ExactResult, enumerate_cubic_topologies, solve_exact, topology_count
from .instances import (
    InputGraph,
    ReductionOutput,
    all_ones,
    cycle_metric,
    ensure_two_disjoint_triangles,
    metric_lift,
    random_metric,
    reduction_from_graph,
    star_metric,
    witness_tree,
)
from .io import read_graph, read_matrix, read_newick, write_graph, write_matrix, write_newick
from .model import (
    DissimilarityMatrix,
    DyadicRational,
    LeafTree,
    ValueMode,
    is_cubic,
    is_metric,
    leaf_distances,
    new_matrix,
)
from .objective import ObjectiveValue, PiMatrix, evaluate, kraft_row_sums, pi_matrix
from .tours import (
    Embedding,
    Tour,
    embed_and_read_tour,
    embedding_count,
    enumerate_compatible_tours,
    mst_cost,
    sample_compatible_tour,
    tour_cost,
    tsp_exact,
)

__all__ = [
    "ApproxReport",
    "DissimilarityMatrix",
    "DyadicRational",
    "Embedding",
    "ExactResult",
    "InputGraph",
    "LeafTree",
    "ObjectiveValue",
    "PiMatrix",
    "ReductionOutput",
    "Tour",
    "ValueMode",
    "all_ones",
    "approximate",
    "cycle_metric",
    "embed_and_read_tour",
    "embedding_count",
    "ensure_two_disjoint_triangles",
    "enumerate_compatible_tours",
    "enumerate_cubic_topologies",
    "evaluate",
    "is_cubic",
    "is_metric",
    "kraft_row_sums",
    "leaf_distances",
    "metric_lift",
    "minimum_spanning_tree",
    "mst_cost",
    "new_matrix",
    "pi_matrix",
    "random_metric",
    "read_graph",
    "read_matrix",
    "read_newick",
    "reduction_from_graph",
    "round_to_cubic",
    "sample_compatible_tour",
    "solve_exact",
    "split_vertex",
    "star_metric",
    "topology_count",
    "tour_cost",
    "tsp_exact",
    "witness_tree",
    "write_graph",
    "write_matrix",
    "write_newick",
]
