"""Sidedness of cover members and 3x3 link graphs between member pairs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Optional

from ..core import Hypergraph3
from .lemmas import pairs_density, product_density
from .structures import Tripartite

PM_KIND = "pm"
B320_KIND = "b320"
B311_KIND = "b311"
SPARSE_KIND = "sparse"
OTHER_KIND = "other"


def _bit(p: int, q: int) -> int:
    return 1 << (3 * p + q)


@dataclass(frozen=True)
class LinkGraph:
    """Bit ``3*p + q`` is set when left class ``p`` and right class ``q`` are
    joined."""

    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < 512:
            raise ValueError("a link graph has 9 possible edges")

    @classmethod
    def from_pairs(cls, pairs) -> "LinkGraph":
        return cls(sum(_bit(p, q) for p, q in set(pairs)))

    def has(self, p: int, q: int) -> bool:
        return bool(self.bits & _bit(p, q))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(p, q) for p in range(3) for q in range(3) if self.has(p, q)]

    def __len__(self) -> int:
        return self.bits.bit_count()

    def transpose(self) -> "LinkGraph":
        return LinkGraph.from_pairs((q, p) for p, q in self.edges)


# left degrees (3, 1, 1): the degree-3 vertices are left 0 and right 0
B311 = LinkGraph.from_pairs([(0, 0), (0, 1), (0, 2), (1, 0), (2, 0)])
# left degrees (3, 2, 0)
B320 = LinkGraph.from_pairs([(0, 0), (0, 1), (0, 2), (1, 1), (1, 2)])


@dataclass(frozen=True)
class LinkClass:
    """``kind`` is one of pm, b320, b311, sparse, other.

    ``witness`` is a permutation ``sigma`` with ``(p, sigma[p])`` the matching
    edges (pm), or a pair of permutations ``(lp, rp)`` mapping the template's
    left/right classes to this graph's classes (b320, b311), plus a flag
    recording whether the template was laid on the transposed graph (b320).
    """

    kind: str
    witness: Optional[tuple] = None
    transposed: bool = False


def _embeds(template: LinkGraph, graph: LinkGraph, lp, rp) -> bool:
    return all(graph.has(lp[p], rp[q]) for p, q in template.edges)


def classify_link(L: LinkGraph) -> LinkClass:
    for sigma in permutations(range(3)):
        if all(L.has(p, sigma[p]) for p in range(3)):
            return LinkClass(PM_KIND, sigma)
    if len(L) <= 4:
        return LinkClass(SPARSE_KIND)
    for transposed, G in ((False, L), (True, L.transpose())):
        for lp in permutations(range(3)):
            for rp in permutations(range(3)):
                if _embeds(B320, G, lp, rp):
                    return LinkClass(B320_KIND, (lp, rp), transposed)
    if len(L) == 5:
        for lp in permutations(range(3)):
            for rp in permutations(range(3)):
                if _embeds(B311, L, lp, rp):
                    return LinkClass(B311_KIND, (lp, rp))
    return LinkClass(OTHER_KIND)


def trichotomy_census() -> dict[str, int]:
    """Classify all 512 link graphs; returns counts per kind among the 256
    with at least five edges, plus the totals."""
    counts = {PM_KIND: 0, B320_KIND: 0, B311_KIND: 0, OTHER_KIND: 0}
    for bits in range(512):
        if bits.bit_count() >= 5:
            counts[classify_link(LinkGraph(bits)).kind] += 1
    counts["total"] = sum(counts.values())
    return counts


def k_sidedness(T: Tripartite, I, H: Hypergraph3, eta: float) -> int:
    """Number of classes ``V`` of ``T`` with ``d(V, pairs of I) >= 2*eta``."""
    if len(I) < 2:
        raise ValueError("need at least two leftover vertices")
    return sum(pairs_density(H, V, I) >= 2 * Fraction(eta) for V in T.classes)


def link_graph_of_pair(Ti: Tripartite, Tj: Tripartite, I, H: Hypergraph3, eta: float) -> LinkGraph:
    if not I:
        return LinkGraph(0)
    bar = 2 * Fraction(eta)
    return LinkGraph.from_pairs(
        (p, q)
        for p, Vp in enumerate(Ti.classes)
        for q, Vq in enumerate(Tj.classes)
        if product_density(H, Vp, Vq, I) >= bar
    )
