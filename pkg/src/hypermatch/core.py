"""Immutable 3-uniform hypergraphs and the counting primitives built on them.

Edges are identified by the colexicographic rank of their vertex triple, so a
hypergraph on ``n`` vertices is a bitset over ``C(n, 3)`` positions.  Vertex
sets are plain ``frozenset`` objects of 0-indexed vertices.  All densities are
returned as exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Optional

import numpy as np

from .errors import InvalidTriple, SetsNotDisjoint, SubsetTooSmall

Triple = tuple[int, int, int]
VertexSet = frozenset


def triple_rank(a: int, b: int, c: int) -> int:
    """Colexicographic rank of the 3-set ``{a, b, c}`` given ``a < b < c``."""
    if not (0 <= a < b < c):
        raise InvalidTriple(f"expected 0 <= a < b < c, got {(a, b, c)}")
    return comb(c, 3) + comb(b, 2) + a


def triple_unrank(rank: int) -> Triple:
    if rank < 0:
        raise InvalidTriple(f"negative rank {rank}")
    c = 2
    while comb(c + 1, 3) <= rank:
        c += 1
    rank -= comb(c, 3)
    b = 1
    while comb(b + 1, 2) <= rank:
        b += 1
    rank -= comb(b, 2)
    return (rank, b, c)


@lru_cache(maxsize=32)
def colex_triples(n: int) -> np.ndarray:
    """All 3-subsets of ``range(n)`` as an ``(C(n,3), 3)`` array in rank order."""
    out = np.empty((comb(n, 3), 3), dtype=np.int64)
    i = 0
    for c in range(2, n):
        for b in range(1, c):
            out[i : i + b, 0] = np.arange(b)
            out[i : i + b, 1] = b
            out[i : i + b, 2] = c
            i += b
    out.setflags(write=False)
    return out


def _sorted_triple(edge: Iterable[int]) -> Triple:
    t = tuple(sorted(edge))
    if len(t) != 3 or len(set(t)) != 3:
        raise InvalidTriple(f"not a 3-set: {tuple(edge)}")
    return t  # type: ignore[return-value]


class Hypergraph3:
    """A 3-uniform hypergraph on vertices ``0..n-1``.

    Instances are immutable; the derived views (edge list, adjacency tensor,
    pair neighbourhoods) are computed lazily and cached.
    """

    __slots__ = ("n", "_bits", "_present", "_edges", "_adj", "_pairs", "_incident", "_degrees")

    def __init__(self, n: int, bits: int = 0):
        if n < 3:
            raise ValueError(f"need n >= 3, got {n}")
        if bits < 0 or bits.bit_length() > comb(n, 3):
            raise ValueError("edge bitset has indices outside C(n, 3)")
        self.n = n
        self._bits = bits
        self._present: Optional[np.ndarray] = None
        self._edges: Optional[np.ndarray] = None
        self._adj: Optional[np.ndarray] = None
        self._pairs: Optional[list[list[int]]] = None
        self._incident: Optional[list[tuple[int, ...]]] = None
        self._degrees: Optional[np.ndarray] = None

    # -- construction -------------------------------------------------

    @classmethod
    def from_mask(cls, n: int, present: np.ndarray) -> "Hypergraph3":
        present = np.asarray(present, dtype=bool)
        if present.shape != (comb(n, 3),):
            raise ValueError("mask length must be C(n, 3)")
        packed = np.packbits(present, bitorder="little")
        H = cls(n, int.from_bytes(packed.tobytes(), "little"))
        present = present.copy()
        present.setflags(write=False)
        H._present = present
        return H

    @classmethod
    def from_ranks(cls, n: int, ranks: Iterable[int]) -> "Hypergraph3":
        present = np.zeros(comb(n, 3), dtype=bool)
        idx = np.fromiter(ranks, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= present.size):
            raise InvalidTriple("edge rank out of range")
        present[idx] = True
        return cls.from_mask(n, present)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph3":
        ranks = []
        for e in edges:
            a, b, c = _sorted_triple(e)
            if c >= n:
                raise InvalidTriple(f"vertex {c} out of range for n={n}")
            ranks.append(triple_rank(a, b, c))
        return cls.from_ranks(n, ranks)

    @classmethod
    def complete(cls, n: int) -> "Hypergraph3":
        return cls.from_mask(n, np.ones(comb(n, 3), dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "Hypergraph3":
        return cls(n, 0)

    # -- basic views --------------------------------------------------

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def present(self) -> np.ndarray:
        """Boolean membership array indexed by colex rank."""
        if self._present is None:
            N = comb(self.n, 3)
            raw = np.frombuffer(self._bits.to_bytes((N + 7) // 8, "little"), dtype=np.uint8)
            present = np.unpackbits(raw, bitorder="little")[:N].astype(bool)
            present.setflags(write=False)
            self._present = present
        return self._present

    @property
    def m(self) -> int:
        return self._bits.bit_count()

    @property
    def edge_array(self) -> np.ndarray:
        """``(m, 3)`` array of edges, rows ascending, in colex order."""
        if self._edges is None:
            e = colex_triples(self.n)[self.present]
            e.setflags(write=False)
            self._edges = e
        return self._edges

    def edges(self) -> list[Triple]:
        return [tuple(map(int, row)) for row in self.edge_array]  # type: ignore[misc]

    def has_edge(self, a: int, b: int, c: int) -> bool:
        a, b, c = sorted((a, b, c))
        if a == b or b == c or a < 0 or c >= self.n:
            return False
        return bool((self._bits >> triple_rank(a, b, c)) & 1)

    def __contains__(self, edge) -> bool:
        return self.has_edge(*edge)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph3):
            return NotImplemented
        return self.n == other.n and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self.n, self._bits))

    def __repr__(self) -> str:
        return f"Hypergraph3(n={self.n}, m={self.m})"

    @property
    def adjacency(self) -> np.ndarray:
        """Symmetric ``n x n x n`` boolean tensor; ``adj[a,b,c]`` iff ``{a,b,c}`` is an edge."""
        if self._adj is None:
            n = self.n
            adj = np.zeros((n, n, n), dtype=bool)
            E = self.edge_array
            for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
                adj[E[:, i], E[:, j], E[:, k]] = True
            adj.setflags(write=False)
            self._adj = adj
        return self._adj

    def pair_neighbours(self, u: int, v: int) -> int:
        """Bitmask of vertices ``w`` with ``{u, v, w}`` an edge."""
        if self._pairs is None:
            n = self.n
            table = [[0] * n for _ in range(n)]
            for a, b, c in self.edge_array.tolist():
                table[a][b] |= 1 << c
                table[b][a] |= 1 << c
                table[a][c] |= 1 << b
                table[c][a] |= 1 << b
                table[b][c] |= 1 << a
                table[c][b] |= 1 << a
            self._pairs = table
        return self._pairs[u][v]

    def incident_masks(self, v: int) -> tuple[int, ...]:
        """Vertex bitmasks of the edges through ``v`` (colex order)."""
        if self._incident is None:
            inc: list[list[int]] = [[] for _ in range(self.n)]
            for a, b, c in self.edge_array.tolist():
                mask = (1 << a) | (1 << b) | (1 << c)
                inc[a].append(mask)
                inc[b].append(mask)
                inc[c].append(mask)
            self._incident = [tuple(x) for x in inc]
        return self._incident[v]

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            d = np.bincount(self.edge_array.ravel(), minlength=self.n)
            d.setflags(write=False)
            self._degrees = d
        return self._degrees

    # -- derived hypergraphs -------------------------------------------

    def toggled(self, ranks: Iterable[int]) -> "Hypergraph3":
        present = self.present.copy()
        idx = np.fromiter(ranks, dtype=np.int64)
        present[idx] = ~present[idx]
        return Hypergraph3.from_mask(self.n, present)

    def with_edges(self, add=(), remove=()) -> "Hypergraph3":
        present = self.present.copy()
        for e in add:
            present[triple_rank(*_sorted_triple(e))] = True
        for e in remove:
            present[triple_rank(*_sorted_triple(e))] = False
        return Hypergraph3.from_mask(self.n, present)

    def restrict(self, U: Iterable[int]) -> "Hypergraph3":
        """Same vertex set, keeping only the edges that lie inside ``U``."""
        inside = np.zeros(self.n, dtype=bool)
        inside[list(U)] = True
        present = self.present & inside[colex_triples(self.n)].all(axis=1)
        return Hypergraph3.from_mask(self.n, present)

    def induced(self, U: Iterable[int]) -> tuple["Hypergraph3", tuple[int, ...]]:
        """Sub-hypergraph on ``U`` relabelled to ``0..|U|-1``; also returns
        the original label of each new vertex."""
        labels = tuple(sorted(set(U)))
        new = {v: i for i, v in enumerate(labels)}
        E = [(new[a], new[b], new[c]) for a, b, c in self.edges() if a in new and b in new and c in new]
        return Hypergraph3.from_edges(len(labels), E), labels


# -- matchings ---------------------------------------------------------


@dataclass(frozen=True)
class Matching:
    """A list of vertex triples; validity against a host is checked by
    :func:`verify_matching`, not on construction."""

    edges: tuple[Triple, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(_sorted_triple(e) for e in self.edges))

    @property
    def covered(self) -> frozenset:
        return frozenset(v for e in self.edges for v in e)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __or__(self, other: "Matching") -> "Matching":
        return Matching(self.edges + tuple(other.edges))

    def canonical(self) -> "Matching":
        return Matching(tuple(sorted(self.edges, key=lambda e: triple_rank(*e))))


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    clause: Optional[str] = None  # "non-edge" | "overlap" | "incomplete"
    detail: str = ""

    def __bool__(self) -> bool:
        return self.accepted


def verify_matching(H: Hypergraph3, M: Matching, perfect: bool = False) -> Verdict:
    seen: set[int] = set()
    for e in M.edges:
        if max(e) >= H.n or not H.has_edge(*e):
            return Verdict(False, "non-edge", f"{e} is not an edge")
        for v in e:
            if v in seen:
                return Verdict(False, "overlap", f"vertex {v} covered twice")
            seen.add(v)
    if perfect and 3 * len(M.edges) != H.n:
        return Verdict(False, "incomplete", f"covers {3 * len(M.edges)} of {H.n} vertices")
    return Verdict(True)


# -- degrees and densities ------------------------------------------------


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple[int, ...]
    min_degree: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "min_degree", min(self.degrees) if self.degrees else 0)

    def argmin(self) -> list[int]:
        return [v for v, d in enumerate(self.degrees) if d == self.min_degree]


def degree_profile(H: Hypergraph3) -> DegreeProfile:
    return DegreeProfile(tuple(int(d) for d in H.degrees))


def min_degree(H: Hypergraph3) -> int:
    return int(H.degrees.min())


def _index(S) -> np.ndarray:
    return np.fromiter(sorted(S), dtype=np.int64)


def _check_disjoint(*sets) -> None:
    for X, Y in combinations(sets, 2):
        if not frozenset(X).isdisjoint(Y):
            raise SetsNotDisjoint(f"sets overlap in {sorted(frozenset(X) & frozenset(Y))}")


def count_inside(H: Hypergraph3, U) -> int:
    """Number of edges with all three vertices in ``U``."""
    if len(U) < 3:
        return 0
    u = _index(U)
    return int(H.adjacency[np.ix_(u, u, u)].sum()) // 6


def subset_density(H: Hypergraph3, U) -> Fraction:
    """``d_3(U) = |E(H|_U)| / C(|U|, 3)``."""
    if len(U) < 3:
        raise SubsetTooSmall(f"|U| = {len(U)} < 3")
    return Fraction(count_inside(H, U), comb(len(U), 3))


def count_cross_pairs(H: Hypergraph3, A, B) -> int:
    """Edges with one vertex in ``A`` and two in ``B`` (``A``, ``B`` disjoint)."""
    if not A or len(B) < 2:
        return 0
    a, b = _index(A), _index(B)
    return int(H.adjacency[np.ix_(a, b, b)].sum()) // 2


def cross_density_pairs(H: Hypergraph3, A, B) -> Fraction:
    """``d_3(A, C(B, 2))``."""
    _check_disjoint(A, B)
    if not A:
        raise SubsetTooSmall("A is empty")
    if len(B) < 2:
        raise SubsetTooSmall(f"|B| = {len(B)} < 2")
    return Fraction(count_cross_pairs(H, A, B), len(A) * comb(len(B), 2))


def count_transversal(H: Hypergraph3, A1, A2, A3) -> int:
    if not (A1 and A2 and A3):
        return 0
    return int(H.adjacency[np.ix_(_index(A1), _index(A2), _index(A3))].sum())


def cross_density_product(H: Hypergraph3, A1, A2, A3) -> Fraction:
    """Fraction of transversal triples of ``A1 x A2 x A3`` that are edges."""
    _check_disjoint(A1, A2, A3)
    if not (A1 and A2 and A3):
        raise SubsetTooSmall("all three sets must be nonempty")
    return Fraction(count_transversal(H, A1, A2, A3), len(A1) * len(A2) * len(A3))


def degree_accounting(H: Hypergraph3, S) -> tuple[int, int, int]:
    """Split the edges meeting ``S`` by how many vertices they have in ``S``.

    Returns ``(e1, e2, e3)``: edges with exactly one, two and three vertices in
    ``S``, so that the degree sum over ``S`` equals ``e1 + 2*e2 + 3*e3``.
    """
    inside = np.zeros(H.n, dtype=bool)
    inside[list(S)] = True
    hits = inside[H.edge_array].sum(axis=1) if H.m else np.zeros(0, dtype=np.int64)
    e1, e2, e3 = (int((hits == k).sum()) for k in (1, 2, 3))
    total = int(H.degrees[inside].sum())
    assert total == e1 + 2 * e2 + 3 * e3, "degree accounting identity violated"
    return e1, e2, e3
