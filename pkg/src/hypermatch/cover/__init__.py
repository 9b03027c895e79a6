"""Covers by complete tripartite subgraphs, their improvement moves, and absorption."""

from .absorb import AbsorbingMatching, absorb_leftover, build_absorbing_matching
from .engine import almost_perfect_matching, improve_by_links, improve_or_report_extremal, improve_two_sided
from .lemmas import (
    find_k3t,
    greedy_graph_matching,
    greedy_tripartite_cover,
    min_degree_subgraph,
    pigeonhole_complete_bipartite,
    tripartite_from_pairs,
    tripartite_from_product,
)
from .links import LinkGraph, classify_link, k_sidedness, link_graph_of_pair
from .structures import AlmostPerfect, EngineParams, Extremal, NotApplicable, Stalled, Tripartite, TripartiteCover
