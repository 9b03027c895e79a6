"""Perfect matchings in 3-uniform hypergraphs with large minimum vertex degree."""

from .constructions import extremal_construction, extremal_plus, random_3graph, random_min_degree
from .core import Hypergraph3, Matching, min_degree, verify_matching
from .exact import has_perfect_matching, max_matching_branch, max_matching_dp
from .io import parse_hypergraph, write_hypergraph
from .pipeline import PipelineConfig, perfect_matching
from .threshold import threshold

__all__ = [
    "Hypergraph3",
    "Matching",
    "PipelineConfig",
    "extremal_construction",
    "extremal_plus",
    "has_perfect_matching",
    "max_matching_branch",
    "max_matching_dp",
    "min_degree",
    "parse_hypergraph",
    "perfect_matching",
    "random_3graph",
    "random_min_degree",
    "threshold",
    "verify_matching",
    "write_hypergraph",
]
