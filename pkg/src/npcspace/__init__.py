"""Geodesics, Frechet means and vistal cells in NPC orthant spaces.

BHV tree space is the main instance; general orthant spaces are given by a
scaffold (compatibility) graph.
"""
from .core import (
    Point,
    ScaffoldGraph,
    Split,
    TreeSpace,
    canonical_split,
    is_flag,
    orthant_of,
    splits_compatible,
    square,
    tree_scaffold,
    unsquare,
)
from .frechet import (
    DescentOptions,
    MeanResult,
    SturmParams,
    WeightedSample,
    bhv_centroid,
    descent_mean,
    inductive_mean,
    mean_edge_report,
    mrc_tree,
    squared_variance,
    squared_variance_gradient,
    sturm_mean,
    variance,
    variance_gradient,
)
from .geodesic import distance, distance_matrix, gtp_support, point_at, verify_support
from .newick import parse_newick, write_newick

__all__ = [
    "DescentOptions", "MeanResult", "Point", "ScaffoldGraph", "Split", "SturmParams", "TreeSpace",
    "WeightedSample", "bhv_centroid", "canonical_split", "descent_mean", "distance", "distance_matrix",
    "gtp_support", "inductive_mean", "is_flag", "mean_edge_report", "mrc_tree", "orthant_of",
    "parse_newick", "point_at", "splits_compatible", "square", "squared_variance",
    "squared_variance_gradient", "sturm_mean", "tree_scaffold", "unsquare", "variance",
    "variance_gradient", "verify_support", "write_newick",
]
