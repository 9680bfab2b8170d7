"""Atom-bond sum-connectivity (ABS) index of trees: exhaustive extremal search and verification."""

__version__ = "0.1.0"

from .tree import (
    Graph,
    InternalPath,
    Tree,
    TreeFormatError,
    VertexPartition,
    canonical_code,
    degree_sequence,
    edge_type_counts,
    internal_paths,
    leaf_partition,
    parse_tree,
    path_tree,
    pendent_count,
    spider,
    star_tree,
)
from .indices import IndexKind, edge_weight, index_value
from .enumeration import EnumSpec, count_trees, enumerate_trees
from .extremal import (
    ExtremalCertificate,
    GammaStarSpec,
    brute_force_min,
    brute_force_min_gamma_p,
    construct_gamma_star,
    gamma_np_lower_bound,
    gamma_p_lower_bound,
    is_gamma_star_member,
    verify_minimizer_properties,
)

__all__ = [
    "__version__",
    "Graph",
    "InternalPath",
    "Tree",
    "TreeFormatError",
    "VertexPartition",
    "canonical_code",
    "degree_sequence",
    "edge_type_counts",
    "internal_paths",
    "leaf_partition",
    "parse_tree",
    "path_tree",
    "pendent_count",
    "spider",
    "star_tree",
    "IndexKind",
    "edge_weight",
    "index_value",
    "EnumSpec",
    "count_trees",
    "enumerate_trees",
    "ExtremalCertificate",
    "GammaStarSpec",
    "brute_force_min",
    "brute_force_min_gamma_p",
    "construct_gamma_star",
    "gamma_np_lower_bound",
    "gamma_p_lower_bound",
    "is_gamma_star_member",
    "verify_minimizer_properties",
]
