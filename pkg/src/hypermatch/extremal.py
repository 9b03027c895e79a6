"""Perfect matchings in hypergraphs close to the extremal example.

Given a sparse certificate set ``B`` (about two thirds of the vertices), the
remaining vertices ``A`` are matched to pairs of ``B``.  Vertices with
atypical degrees are covered first, then a bipartite matching between ``A``
and disjoint good pairs of ``B`` finishes the job.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import ceil, comb
from typing import Optional

import networkx as nx
import numpy as np

from .core import Hypergraph3, Matching, _index, subset_density, verify_matching
from .errors import GoodPairGraphTooSparse, GreedyFailed, HallViolated, InvalidOrder, NotExtremal, StageFailed
from .exact import max_matching_branch

TRACE_FIELDS = ("stage", "S_A", "S_B", "X_A", "X_B", "edges_committed", "A_size", "B_size")

INDUCTION_FACTOR = 27


# -- exact threshold comparisons ------------------------------------------------------


def below_one_minus_sqrt(deg: int, total: int, alpha) -> bool:
    """``deg < (1 - sqrt(alpha)) * total``."""
    gap = 1 - Fraction(deg, total)
    return gap > 0 and Fraction(alpha) < gap * gap


def below_cube_root(deg: int, total: int, alpha) -> bool:
    """``deg < alpha**(1/3) * total``."""
    return Fraction(deg, total) ** 3 < Fraction(alpha)


def at_least_one_minus_fourth_root(count: int, total: int, alpha, factor: int = 40) -> bool:
    """``count >= (1 - factor * alpha**(1/4)) * total``."""
    gap = 1 - Fraction(count, total)
    return gap <= 0 or (gap / factor) ** 4 <= Fraction(alpha)


def ceil_fourth_root_multiple(x: int, alpha) -> int:
    """``ceil(x * alpha**(1/4))`` for a nonnegative integer ``x``."""
    a = Fraction(alpha)
    k = max(0, ceil(x * float(a) ** 0.25) - 2)
    while Fraction(k) ** 4 < x**4 * a:
        k += 1
    return k


# -- degrees toward the typical edge shapes ----------------------------------------------


def degrees_to_B_pairs(H: Hypergraph3, A, B) -> dict[int, int]:
    """``deg(a, pairs of B)`` for each ``a`` in ``A``."""
    if not A:
        return {}
    a, b = _index(A), _index(B)
    d = H.adjacency[np.ix_(a, b, b)].sum(axis=(1, 2)) // 2
    return dict(zip(a.tolist(), d.tolist()))


def degrees_to_BA(H: Hypergraph3, A, B) -> dict[int, int]:
    """``deg(b, B x A)``: edges through ``b`` with one more ``B`` vertex and one ``A`` vertex."""
    if not B:
        return {}
    a, b = _index(A), _index(B)
    d = H.adjacency[np.ix_(b, b, a)].sum(axis=(1, 2)) if len(a) else np.zeros(len(b), dtype=np.int64)
    return dict(zip(b.tolist(), d.tolist()))


def exceptional_sets(H: Hypergraph3, A, B, alpha) -> tuple[frozenset, frozenset, frozenset, frozenset]:
    """``(X_A, X_B, S_A, S_B)`` by their literal degree definitions.

    For larger ``alpha`` the cube-root bound exceeds ``1 - sqrt(alpha)``, so
    each ``X`` is taken together with its ``S`` to keep ``S <= X``.
    """
    NA = comb(len(B), 2)
    NB = len(A) * (len(B) - 1)
    dA = degrees_to_B_pairs(H, A, B)
    dB = degrees_to_BA(H, A, B)
    XA = frozenset(v for v, d in dA.items() if NA and below_one_minus_sqrt(d, NA, alpha))
    SA = frozenset(v for v, d in dA.items() if NA and below_cube_root(d, NA, alpha))
    XB = frozenset(v for v, d in dB.items() if NB and below_one_minus_sqrt(d, NB, alpha))
    SB = frozenset(v for v, d in dB.items() if NB and below_cube_root(d, NB, alpha))
    return XA | SA, XB | SB, SA, SB


@dataclass(frozen=True)
class ExtremalPartition:
    A: frozenset
    B: frozenset
    alpha: float
    X_A: frozenset = frozenset()
    X_B: frozenset = frozenset()
    S_A: frozenset = frozenset()
    S_B: frozenset = frozenset()
    # remainders after each elimination stage; equal to (A, B) until then
    A_rest: Optional[frozenset] = None
    B_rest: Optional[frozenset] = None
    flags: tuple[str, ...] = ()
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def build(cls, H: Hypergraph3, A, B, alpha, **kw) -> "ExtremalPartition":
        A, B = frozenset(A), frozenset(B)
        XA, XB, SA, SB = exceptional_sets(H, A, B, alpha)
        return cls(A, B, alpha, XA, XB, SA, SB, A, B, **kw)

    def recheck(self, H: Hypergraph3) -> None:
        assert (self.X_A, self.X_B, self.S_A, self.S_B) == exceptional_sets(H, self.A, self.B, self.alpha)
        assert self.S_A <= self.X_A <= self.A and self.S_B <= self.X_B <= self.B
        assert not self.A & self.B and len(self.A | self.B) == H.n
        assert len(self.B_rest) == 2 * len(self.A_rest), "remainder ratio broken"

    def bounds_report(self) -> dict[str, bool]:
        r = Fraction(self.alpha)
        sq = float(r) ** 0.5
        return {
            "X_A": len(self.X_A) <= 18 * sq * len(self.A),
            "X_B": len(self.X_B) <= 18 * sq * len(self.B),
            "S_B": len(self.S_B) <= 40 * r * len(self.B),
            "S_A": len(self.S_A) <= 40 * r * len(self.A),
        }


def is_extremal_certificate(H: Hypergraph3, B, alpha) -> bool:
    B = frozenset(B)
    return (
        len(B) >= 3
        and len(B) >= (Fraction(2, 3) - Fraction(alpha)) * H.n
        and subset_density(H, B) < Fraction(alpha)
    )


def _inside_degree(H: Hypergraph3, v: int, S) -> int:
    m = 0
    for u in S:
        m |= 1 << u
    m &= ~(1 << v)
    return sum((H.pair_neighbours(v, u) & m).bit_count() for u in S if u != v) // 2


def prepare_extremal_partition(H: Hypergraph3, B0, alpha) -> ExtremalPartition:
    """Rebalance a certificate to ``|A| = n/3``, ``|B| = 2n/3`` and classify
    the exceptional vertices.

    Surplus ``B`` vertices with the most edges inside ``B`` move to ``A``;
    a shortfall is filled from ``A`` by the vertices with the fewest edges
    into pairs of ``B``.  Ties go to the smaller index.
    """
    n = H.n
    if n % 3:
        raise InvalidOrder(f"n = {n} is not a multiple of 3")
    if not is_extremal_certificate(H, B0, alpha):
        raise NotExtremal("B does not have the required size and sparsity")
    B = set(B0)
    A = set(range(n)) - B
    while len(B) > 2 * n // 3:
        v = max(sorted(B), key=lambda u: _inside_degree(H, u, B))
        B.remove(v)
        A.add(v)
    while len(B) < 2 * n // 3:
        dA = degrees_to_B_pairs(H, A, B)
        v = min(sorted(A), key=lambda u: dA[u])
        A.remove(v)
        B.add(v)
    d = subset_density(H, B)
    if d >= 6 * Fraction(alpha):
        raise NotExtremal(f"rebalanced B has density {float(d):.4f} >= 6 alpha")
    P = ExtremalPartition.build(H, A, B, alpha, diagnostics={"density_B": d})
    P.diagnostics["size_bounds"] = P.bounds_report()
    return P


def exchange_reduce(P: ExtremalPartition, H: Hypergraph3) -> ExtremalPartition:
    """Swap strongly exceptional vertices across the partition while both
    sides have one and the swap shrinks their total."""
    while P.S_A and P.S_B:
        a, b = min(P.S_A), min(P.S_B)
        Q = ExtremalPartition.build(
            H, (P.A - {a}) | {b}, (P.B - {b}) | {a}, P.alpha, flags=P.flags, diagnostics=P.diagnostics
        )
        if len(Q.S_A) + len(Q.S_B) >= len(P.S_A) + len(P.S_B):
            break
        P = Q
    return P


# -- greedy stages ------------------------------------------------------------------------


def _find_edge(H: Hypergraph3, v: int, first, second):
    """Edge ``{v, x, y}`` with ``x`` from ``first`` and ``y`` from ``second``;
    pools are ordered by preference."""
    for x in first:
        nb = H.pair_neighbours(v, x)
        for y in second:
            if y == x:
                continue
            if nb >> y & 1:
                return (v, x, y)
    return None


def _prefer(pool, preferred) -> list[int]:
    return sorted(pool, key=lambda u: (u not in preferred, u))


def _inductive_matching(H: Hypergraph3, U: frozenset, k: int) -> Optional[list[tuple]]:
    """``k`` disjoint edges inside ``U``: match ``k - 1`` edges avoiding a
    maximum-degree vertex ``v``, then add an edge through ``v``."""
    if k == 0:
        return []
    m = 0
    for u in U:
        m |= 1 << u
    if k == 1:
        for v in sorted(U):
            for u in sorted(U):
                if u > v:
                    rest = H.pair_neighbours(v, u) & m & ~((1 << (u + 1)) - 1)
                    if rest:
                        return [(v, u, (rest & -rest).bit_length() - 1)]
        return None
    v = max(sorted(U), key=lambda u: _inside_degree(H, u, U))
    M1 = _inductive_matching(H, U - {v}, k - 1)
    if M1 is None:
        return None
    free = sorted(U - {v} - {x for e in M1 for x in e})
    e = _find_edge(H, v, free, free)
    return None if e is None else M1 + [e]


def eliminate_strongly_exceptional(P: ExtremalPartition, H: Hypergraph3) -> tuple[Matching, ExtremalPartition]:
    if P.S_A and P.S_B:
        raise StageFailed("exchange", "strongly exceptional vertices remain on both sides")
    A, B = set(P.A), set(P.B)
    edges: list[tuple] = []
    used: set[int] = set()
    if P.S_B:
        for b in sorted(P.S_B):
            if b in used:
                continue
            pool = _prefer(B - used - {b} - P.S_B, P.X_B)
            e = _find_edge(H, b, pool, pool)
            if e is None:
                raise GreedyFailed("strongly-exceptional", f"no edge inside B through {b}", vertex=b)
            edges.append(e)
            used |= set(e)
        for _ in range(len(edges)):
            e = None
            for b in sorted(B - used - P.X_B):
                pool = _prefer(A - used, P.X_A)
                e = _find_edge(H, b, pool, pool)
                if e:
                    break
            if e is None:
                raise GreedyFailed("strongly-exceptional", "no balancing edge with two A vertices")
            edges.append(e)
            used |= set(e)
        A_rest, B_rest = frozenset(A - used), frozenset(B - used)
    elif P.S_A:
        U = frozenset(P.S_A | B)
        k = len(P.S_A)
        flags = P.flags
        M = None
        if len(B) >= INDUCTION_FACTOR * k:
            M = _inductive_matching(H, U, k)
        if M is None:
            flags = flags + ("strong-A-search",)
            res = max_matching_branch(H.restrict(U), budget=200_000, target=k)
            if res.size < k:
                raise GreedyFailed("strongly-exceptional", f"no {k} disjoint edges among S_A and B")
            M = list(res.witness.edges)[:k]
        P = replace(P, flags=flags)
        edges = [tuple(e) for e in M]
        used = {x for e in edges for x in e}
        A_rest, B_rest = frozenset(A - P.S_A), frozenset(U - used)
    else:
        return Matching(), P
    MS = Matching(tuple(edges))
    assert verify_matching(H, MS), "strongly exceptional stage built an invalid matching"
    assert (P.S_A | P.S_B) <= MS.covered
    assert len(B_rest) == 2 * len(A_rest), "remainder ratio broken"
    return MS, replace(P, A_rest=A_rest, B_rest=B_rest)


def eliminate_exceptional(P: ExtremalPartition, H: Hypergraph3) -> tuple[Matching, ExtremalPartition]:
    A, B = set(P.A_rest), set(P.B_rest)
    edges: list[tuple] = []
    used: set[int] = set()
    for a in sorted(P.X_A & A):
        pool = _prefer(B - used, P.X_B)
        e = _find_edge(H, a, pool, pool)
        if e is None:
            raise GreedyFailed("exceptional", f"no edge {{a, b, b'}} through {a}", vertex=a)
        edges.append(e)
        used |= set(e)
    for b in sorted(P.X_B & B):
        if b in used:
            continue
        e = _find_edge(H, b, sorted(A - used), sorted(B - used - {b}))
        if e is None:
            raise GreedyFailed("exceptional", f"no edge {{b, a, b'}} through {b}", vertex=b)
        edges.append(e)
        used |= set(e)
    MX = Matching(tuple(edges))
    assert verify_matching(H, MX)
    A_rest, B_rest = frozenset(A - used), frozenset(B - used)
    assert len(B_rest) == 2 * len(A_rest), "remainder ratio broken"
    return MX, replace(P, A_rest=A_rest, B_rest=B_rest)


# -- good pairs and the bipartite finish ----------------------------------------------------


@dataclass(frozen=True)
class GoodPairSystem:
    P1: tuple[tuple[int, int], ...]
    P2: tuple[tuple[int, int], ...]
    alpha: float
    factor: int = 40

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return self.P1 + self.P2


def pair_support(H: Hypergraph3, pair, A) -> int:
    am = 0
    for a in A:
        am |= 1 << a
    return (H.pair_neighbours(*pair) & am).bit_count()


def is_good_pair(H: Hypergraph3, pair, A, alpha, factor: int = 40) -> bool:
    return at_least_one_minus_fourth_root(pair_support(H, pair, A), len(A), alpha, factor)


def good_pair_graph(H: Hypergraph3, B, A, alpha) -> nx.Graph:
    G = nx.Graph()
    Bs = sorted(B)
    G.add_nodes_from(Bs)
    for i, u in enumerate(Bs):
        for v in Bs[i + 1:]:
            if is_good_pair(H, (u, v), A, alpha):
                G.add_edge(u, v)
    return G


def p1_size(B_size: int, alpha) -> int:
    return min(ceil_fourth_root_multiple(100 * B_size, alpha), B_size // 2)


def _sample_p1(G: nx.Graph, size: int, seed: int) -> list[tuple[int, int]]:
    rng = np.random.default_rng(seed)
    order = list(G.nodes)
    rng.shuffle(order)
    taken: set[int] = set()
    out = []
    for u in order:
        if len(out) >= size:
            break
        if u in taken:
            continue
        options = sorted(v for v in G.adj[u] if v not in taken)
        if not options:
            continue
        v = options[int(rng.integers(len(options)))]
        out.append(tuple(sorted((int(u), int(v)))))
        taken |= {u, v}
    return out


def _p1_properties(H: Hypergraph3, P1, A) -> bool:
    if not P1:
        return True
    for a in A:
        hits = sum(H.has_edge(a, *p) for p in P1)
        if 4 * hits < 3 * len(P1):
            return False
    return all(4 * pair_support(H, p, A) >= 3 * len(A) for p in P1)


def build_good_pairs(P: ExtremalPartition, H: Hypergraph3, seed: int = 0) -> GoodPairSystem:
    A, B = P.A_rest, P.B_rest
    if len(B) != 2 * len(A) or not A:
        raise ValueError("need |B''| = 2|A''| > 0")
    G = good_pair_graph(H, B, A, P.alpha)
    want = p1_size(len(B), P.alpha)
    for attempt in (seed, seed + 1):
        P1 = _sample_p1(G, want, attempt)
        if _p1_properties(H, P1, A):
            break
    else:
        raise StageFailed("good-pairs", "sampled pairs miss the 3/4 coverage properties twice")
    rest = G.subgraph(set(B) - {v for p in P1 for v in p}).copy()
    P2: list[tuple[int, int]] = []
    if rest.number_of_nodes():
        k = rest.number_of_nodes()
        low = min(d for _, d in rest.degree)
        if 2 * low < k:
            raise GoodPairGraphTooSparse(f"good-pair graph on {k} vertices has minimum degree {low}")
        pm = nx.max_weight_matching(rest, maxcardinality=True)
        if 2 * len(pm) != k:
            raise GoodPairGraphTooSparse("good-pair graph has no perfect pairing")
        P2 = sorted(tuple(sorted(e)) for e in pm)
    gps = GoodPairSystem(tuple(P1), tuple(P2), P.alpha)
    assert all(is_good_pair(H, p, A, P.alpha) for p in gps.pairs)
    flat = [v for p in gps.pairs for v in p]
    assert len(flat) == len(set(flat)) and set(flat) == set(B)
    return gps


def saturate_right(L, R, adjacent) -> dict:
    """Matching saturating ``R`` in the bipartite graph given by ``adjacent(l, r)``.

    Raises HallViolated with a set ``Q`` of ``R`` vertices and its smaller
    neighbourhood when none exists.
    """
    G = nx.Graph()
    Ln = [("L", x) for x in L]
    Rn = [("R", y) for y in R]
    G.add_nodes_from(Ln)
    G.add_nodes_from(Rn)
    G.add_edges_from((l, r) for l in Ln for r in Rn if adjacent(l[1], r[1]))
    match = nx.bipartite.hopcroft_karp_matching(G, top_nodes=Rn)
    unmatched = [r for r in Rn if r not in match]
    if not unmatched:
        return {r[1]: match[r][1] for r in Rn}
    # alternating search from an unmatched right vertex
    Q, N = {unmatched[0]}, set()
    frontier = [unmatched[0]]
    while frontier:
        r = frontier.pop()
        for l in G.adj[r]:
            if l not in N:
                N.add(l)
                r2 = match.get(l)
                if r2 is not None and r2 not in Q:
                    Q.add(r2)
                    frontier.append(r2)
    assert len(N) < len(Q)
    raise HallViolated(sorted(q[1] for q in Q), sorted(x[1] for x in N))


def hall_finish(P: ExtremalPartition, gps: GoodPairSystem, H: Hypergraph3) -> Matching:
    L = sorted(P.A_rest)
    R = list(gps.pairs)
    if len(R) != len(L):
        raise ValueError(f"{len(R)} pairs for {len(L)} vertices")
    pairing = saturate_right(L, R, lambda a, p: H.has_edge(a, *p))
    M = Matching(tuple((a, *p) for p, a in pairing.items()))
    assert verify_matching(H, M)
    return M


# -- composition ------------------------------------------------------------------------------


def _trace_row(stage, P: ExtremalPartition, committed: int) -> dict:
    return {
        "stage": stage,
        "S_A": len(P.S_A),
        "S_B": len(P.S_B),
        "X_A": len(P.X_A),
        "X_B": len(P.X_B),
        "edges_committed": committed,
        "A_size": len(P.A_rest),
        "B_size": len(P.B_rest),
    }


def extremal_perfect_matching(
    H: Hypergraph3, B0, alpha: float = 0.3, seed: int = 0, trace: Optional[list] = None
) -> Matching:
    """Perfect matching from an extremality certificate ``B0``.

    Raises a StageFailed subclass naming the stage that could not complete,
    or NotExtremal.  A returned matching is always verified perfect.
    """
    rows = trace if trace is not None else []
    P = prepare_extremal_partition(H, B0, alpha)
    rows.append(_trace_row("prepare", P, 0))
    P = exchange_reduce(P, H)
    P.recheck(H)
    rows.append(_trace_row("exchange", P, 0))
    MS, P = eliminate_strongly_exceptional(P, H)
    P.recheck(H)
    rows.append(_trace_row("strongly-exceptional", P, len(MS)))
    MX, P = eliminate_exceptional(P, H)
    P.recheck(H)
    rows.append(_trace_row("exceptional", P, len(MS) + len(MX)))
    if P.A_rest:
        gps = build_good_pairs(P, H, seed)
        rows.append(_trace_row("good-pairs", P, len(MS) + len(MX)))
        MF = hall_finish(P, gps, H)
    else:
        MF = Matching()
    M = MS | MX | MF
    rows.append(_trace_row("hall-finish", P, len(M)))
    verdict = verify_matching(H, M, perfect=True)
    if not verdict:
        raise StageFailed("compose", f"assembled matching rejected: {verdict.detail}")
    return M.canonical()
