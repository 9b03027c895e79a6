"""Extraction lemmas: complete tripartite subgraphs of dense regions, the
pigeonhole biclique lemma, and two folklore graph lemmas.

All searches are deterministic (lexicographic by vertex index) and every
returned object is checked against the host before it leaves this module.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import ceil, comb, floor, log2
from typing import Optional

import networkx as nx
import numpy as np

from ..core import Hypergraph3, _check_disjoint
from ..errors import DensityTooLow
from .structures import Tripartite, TripartiteCover, mask_vertices, vmask

SEARCH_LIMIT = 50_000


# -- exact densities from pair-neighbour bitmasks --------------------------------


def count_product(H: Hypergraph3, X, Y, Z) -> int:
    """Edges with one vertex in each of the disjoint sets ``X``, ``Y``, ``Z``."""
    zm = vmask(Z)
    return sum((H.pair_neighbours(x, y) & zm).bit_count() for x in X for y in Y)


def count_into_pairs(H: Hypergraph3, A, B) -> int:
    """Edges with one vertex in ``A`` and two in ``B`` (disjoint sets)."""
    bm = vmask(B)
    return sum((H.pair_neighbours(a, b) & bm).bit_count() for a in A for b in B) // 2


def product_density(H: Hypergraph3, X, Y, Z) -> Fraction:
    return Fraction(count_product(H, X, Y, Z), len(X) * len(Y) * len(Z))


def pairs_density(H: Hypergraph3, A, B) -> Fraction:
    return Fraction(count_into_pairs(H, A, B), len(A) * comb(len(B), 2))


# -- Erdos-type search -------------------------------------------------------------


def _first_edge(H: Hypergraph3, region) -> Optional[tuple[int, int, int]]:
    """An edge inside ``region`` through a vertex of least degree.

    Fail-first: the partners are also the lowest-degree ones available, so
    that scarce high-degree vertices are saved for later (ties: lower index).
    """
    deg = H.degrees
    order = sorted(region, key=lambda v: (int(deg[v]), v))
    rm = vmask(order)
    for x in order:
        for y in order:
            if y == x:
                continue
            nb = H.pair_neighbours(x, y) & rm
            if nb:
                z = min(mask_vertices(nb), key=lambda v: (int(deg[v]), v))
                return tuple(sorted((x, y, z)))  # type: ignore[return-value]
    return None


def _lowest(mask: int, k: int) -> tuple[int, ...]:
    return tuple(mask_vertices(mask)[:k])


def find_k3t(H: Hypergraph3, region, t: int, limit: int = SEARCH_LIMIT) -> Optional[Tripartite]:
    """A complete tripartite subgraph with classes of size ``t`` inside ``region``.

    Seed classes are tried in lexicographic order; candidate second-class
    vertices are bucketed by their common link with the seed before a general
    search.  Returns None when none exists, or when ``limit`` seed classes were
    tried without success.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    if len(region) < 3 * t:
        return None
    first = _first_edge(H, region)
    if first is None or t == 1:
        return None if first is None else Tripartite(tuple((v,) for v in first))  # type: ignore[arg-type]
    R = sorted(region)
    rm = vmask(R)
    tried = 0
    for V1 in combinations(R, t):
        tried += 1
        if tried > limit:
            return None
        free = rm & ~vmask(V1)
        links: dict[int, int] = {}
        for y in mask_vertices(free):
            link = free & ~(1 << y)
            for x in V1:
                link &= H.pair_neighbours(x, y)
                if not link:
                    break
            if link.bit_count() >= t:
                links[y] = link
        if len(links) < t:
            continue
        # vertices sharing an identical link are interchangeable
        buckets: dict[int, list[int]] = {}
        for y, link in links.items():
            buckets.setdefault(link, []).append(y)
        for link, ys in buckets.items():
            rest = link & ~vmask(ys[:t])
            if len(ys) >= t and rest.bit_count() >= t:
                return _checked(H, (V1, tuple(ys[:t]), _lowest(rest, t)))
        for V2 in combinations(sorted(links), t):
            common = free & ~vmask(V2)
            for y in V2:
                common &= links[y]
            if common.bit_count() >= t:
                return _checked(H, (V1, V2, _lowest(common, t)))
    return None


def _checked(H: Hypergraph3, classes) -> Tripartite:
    T = Tripartite(tuple(classes))
    assert T.is_complete(H), "extracted tripartite graph is not complete"
    return T


def greedy_tripartite_cover(
    H: Hypergraph3, allowed, t: int, eta: float, base: Optional[TripartiteCover] = None
) -> TripartiteCover:
    """Greedily add disjoint complete tripartite graphs inside ``allowed``.

    Stops when nothing more is found or fewer than ``eta**2 * n`` allowed
    vertices remain.  For ``t = 1`` this is a greedy maximal matching.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    members = list(base.members) if base is not None else []
    if base is not None and base.members and base.t != t:
        raise ValueError("base cover has a different class size")
    region = set(allowed) - {v for T in members for v in T.vertices}
    while len(region) >= max(3 * t, eta * eta * H.n):
        T = find_k3t(H, region, t)
        if T is None:
            break
        members.append(T)
        region -= T.vertices
    return TripartiteCover(H.n, t, tuple(members))


# -- pigeonhole biclique lemma -------------------------------------------------------


def pigeonhole_complete_bipartite(adj, eta: float) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Complete bipartite subgraph of a dense bipartite graph.

    ``adj`` is a boolean ``|A| x |B|`` matrix.  Vertices of ``B`` with at
    least ``eta*|A|/2`` neighbours are grouped by their exact neighbourhood;
    the largest group (ties: smallest first index) and its common
    neighbourhood are returned as ``(A', B')`` index tuples.
    """
    adj = np.asarray(adj, dtype=bool)
    a, b = adj.shape
    if a > 30:
        raise ValueError(f"|A| = {a} > 30; signatures would need 2^{a} buckets")
    if a == 0 or b == 0 or Fraction(int(adj.sum()), a * b) < Fraction(eta):
        raise DensityTooLow(f"density below eta = {eta}")
    weights = 1 << np.arange(a, dtype=np.int64)
    sigs = (adj * weights[:, None]).sum(axis=0)
    degs = adj.sum(axis=0)
    half = Fraction(eta) * a / 2
    buckets: dict[int, list[int]] = {}
    for j in range(b):
        if degs[j] >= half:
            buckets.setdefault(int(sigs[j]), []).append(j)
    sig, members = min(buckets.items(), key=lambda kv: (-len(kv[1]), kv[1][0]))
    A_prime = tuple(i for i in range(a) if sig >> i & 1)
    assert adj[np.ix_(A_prime, members)].all()
    assert len(A_prime) >= ceil(half) and len(members) >= ceil(Fraction(eta) / 2 * b / 2**a)
    return A_prime, tuple(members)


# -- tripartite extraction from products and pairs ----------------------------------


def _bipartite_biclique(left, nbr: dict, s: int, limit: int = SEARCH_LIMIT):
    """``s`` left vertices and ``s`` right vertices (bitmask) forming a
    complete bipartite graph, from a left-to-right-mask neighbourhood map."""
    cand = [x for x in left if nbr.get(x, 0).bit_count() >= s]
    for i, L in enumerate(combinations(cand, s)):
        if i >= limit:
            return None
        common = -1
        for x in L:
            common &= nbr[x]
        if common.bit_count() >= s:
            return L, _lowest(common, s)
    return None


def _graph_biclique(nbr: dict, s: int, limit: int = SEARCH_LIMIT):
    """Disjoint ``B', B''`` of size ``s`` with every cross pair an edge."""
    cand = sorted(v for v, m in nbr.items() if m.bit_count() >= s)
    for i, L in enumerate(combinations(cand, s)):
        if i >= limit:
            return None
        common = ~vmask(L)
        for x in L:
            common &= nbr[x]
        if common.bit_count() >= s:
            return L, _lowest(common, s)
    return None


def _sizes(size: Optional[int], target: int) -> range:
    return range(size, size - 1, -1) if size is not None else range(target, 0, -1)


def tripartite_from_product(H: Hypergraph3, X, Y, Z, eta: float, size: Optional[int] = None) -> Optional[Tripartite]:
    """Complete tripartite ``(X', Y', Z')`` with ``X' <= X`` etc.

    The class size is ``size`` if given, else the largest achievable value
    starting from ``max(1, floor(eta/4 * log2|X|))``.  Third vertices are
    first grouped by their set of adjacent ``X x Y`` pairs; when no group
    yields a biclique of the pair graph, a direct search follows.
    """
    _check_disjoint(X, Y, Z)
    X, Y, Z = sorted(X), sorted(Y), sorted(Z)
    if not (X and Y and Z) or product_density(H, X, Y, Z) < Fraction(eta):
        raise DensityTooLow(f"transversal density below eta = {eta}")
    target = max(1, floor(eta / 4 * log2(len(X)))) if len(X) > 1 else 1
    zm = vmask(Z)
    nb = {(x, y): H.pair_neighbours(x, y) & zm for x in X for y in Y}
    for s in _sizes(size, target):
        if s > min(len(X), len(Y), len(Z)):
            continue
        # pigeonhole route: z's grouped by their adjacent pairs
        groups: dict[tuple, list[int]] = {}
        for z in Z:
            sig = tuple(p for p, m in nb.items() if m >> z & 1)
            if Fraction(len(sig)) >= Fraction(eta) * len(X) * len(Y) / 2:
                groups.setdefault(sig, []).append(z)
        for sig, zs in sorted(groups.items(), key=lambda kv: (-len(kv[1]), kv[1][0])):
            if len(zs) < s:
                continue
            ymap = {y: i for i, y in enumerate(Y)}
            pair_nbr: dict[int, int] = {}
            for x, y in sig:
                pair_nbr[x] = pair_nbr.get(x, 0) | (1 << ymap[y])
            found = _bipartite_biclique(X, pair_nbr, s)
            if found:
                Xs, yi = found
                return _checked(H, (Xs, tuple(Y[i] for i in yi), tuple(zs[:s])))
        # direct route
        for i, Xs in enumerate(combinations(X, s)):
            if i >= SEARCH_LIMIT:
                break
            links = {}
            for y in Y:
                link = zm
                for x in Xs:
                    link &= nb[(x, y)]
                if link.bit_count() >= s:
                    links[y] = link
            found = _bipartite_biclique(sorted(links), links, s)
            if found:
                Ys, Zs = found
                return _checked(H, (Xs, Ys, Zs))
    return None


def tripartite_from_pairs(H: Hypergraph3, A, B, eta: float, size: Optional[int] = None) -> Optional[Tripartite]:
    """Complete tripartite ``(A', B', B'')`` with ``A' <= A`` and disjoint
    ``B', B'' <= B``; class size ``size`` if given, else the largest
    achievable value starting from ``max(1, floor(eta*|A|/2))``."""
    _check_disjoint(A, B)
    A, B = sorted(A), sorted(B)
    if not A or len(B) < 2 or pairs_density(H, A, B) < Fraction(eta):
        raise DensityTooLow(f"density of A into pairs of B below eta = {eta}")
    target = max(1, floor(eta * len(A) / 2))
    bm = vmask(B)
    nb = {a: {b: H.pair_neighbours(a, b) & bm for b in B} for a in A}
    for s in _sizes(size, target):
        if s > len(A) or 2 * s > len(B):
            continue
        # pigeonhole route: pairs of B grouped by their neighbourhood in A
        groups: dict[int, list[tuple[int, int]]] = {}
        half = Fraction(eta) * len(A) / 2
        for i, b1 in enumerate(B):
            for b2 in B[i + 1:]:
                sig = 0
                for k, a in enumerate(A):
                    if nb[a][b1] >> b2 & 1:
                        sig |= 1 << k
                if sig.bit_count() >= max(half, s):
                    groups.setdefault(sig, []).append((b1, b2))
        for sig, pairs in sorted(groups.items(), key=lambda kv: (-len(kv[1]), kv[1][0])):
            graph: dict[int, int] = {}
            for b1, b2 in pairs:
                graph[b1] = graph.get(b1, 0) | (1 << b2)
                graph[b2] = graph.get(b2, 0) | (1 << b1)
            found = _graph_biclique(graph, s)
            if found:
                As = tuple(A[k] for k in range(len(A)) if sig >> k & 1)[:s]
                return _checked(H, (As, found[0], found[1]))
        # direct route: fix A', intersect its pair graphs
        for i, As in enumerate(combinations(A, s)):
            if i >= SEARCH_LIMIT:
                break
            graph = {}
            for b in B:
                m = bm
                for a in As:
                    m &= nb[a][b]
                if m:
                    graph[b] = m
            found = _graph_biclique(graph, s)
            if found:
                return _checked(H, (As, found[0], found[1]))
    return None


# -- folklore graph lemmas ----------------------------------------------------------


def min_degree_subgraph(G: nx.Graph) -> nx.Graph:
    """Induced subgraph of minimum degree at least ``m/n`` of the input.

    Repeatedly deletes a vertex whose current degree is below ``m/n``, where
    ``m`` and ``n`` are those of the original graph.
    """
    n, m = G.number_of_nodes(), G.number_of_edges()
    if n == 0:
        return G.copy()
    if m == 0:
        return G.subgraph([min(G.nodes)]).copy()
    H = G.copy()
    changed = True
    while changed:
        changed = False
        for v in sorted(H.nodes):
            if H.degree(v) * n < m:
                H.remove_node(v)
                changed = True
    assert H.number_of_nodes() > 0
    return H


def greedy_graph_matching(G: nx.Graph) -> list[tuple]:
    """Matching of size at least ``min(min_degree, floor(n/2))``.

    A greedy maximal matching is improved while two unmatched vertices send
    at least three edges to some matched edge, which can then be swapped for
    two edges.
    """
    mate: dict = {}
    for u, v in sorted(tuple(sorted(e)) for e in G.edges):
        if u not in mate and v not in mate:
            mate[u], mate[v] = v, u
    improved = True
    while improved:
        improved = False
        free = sorted(v for v in G.nodes if v not in mate)
        for i, u in enumerate(free):
            for w in free[i + 1:]:
                if G.has_edge(u, w):
                    mate[u], mate[w] = w, u
                    improved = True
                    break
                for x in sorted(G.adj[u]):
                    y = mate.get(x)
                    if y is None:
                        continue
                    if G.has_edge(w, y):
                        a, b = (x, y)
                    elif G.has_edge(u, y) and G.has_edge(w, x):
                        a, b = (y, x)
                    else:
                        continue
                    # u-a and w-b replace the matched edge a-b
                    mate[u], mate[a] = a, u
                    mate[w], mate[b] = b, w
                    improved = True
                    break
                if improved:
                    break
            if improved:
                break
    return sorted({tuple(sorted((u, v))) for u, v in mate.items()})
