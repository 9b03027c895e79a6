"""Cover-improvement loop.

Starting from a greedy cover by complete tripartite graphs, three moves try
to enlarge it:

* ``improve_two_sided``: members with two classes densely joined to pairs of
  leftover vertices trade a class's worth of vertices for two new members;
* ``improve_by_links``: pairs of members whose link graph has a perfect
  matching (or contains the (3,2,0) pattern) absorb leftover vertices;
* ``improve_or_report_extremal``: when almost all links have the (3,1,1)
  pattern, either grow using the weak classes or certify that the weak
  classes plus the leftover span a sparse set.

Every move returns a new valid cover and its gain, or ``NotApplicable``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, floor, log2
from typing import Callable, Optional, Union

import networkx as nx

from ..core import Hypergraph3, degree_accounting, subset_density, verify_matching
from ..errors import DensityTooLow
from .lemmas import (
    greedy_graph_matching,
    greedy_tripartite_cover,
    min_degree_subgraph,
    pairs_density,
    tripartite_from_pairs,
    tripartite_from_product,
)
from .links import B311_KIND, B320_KIND, PM_KIND, LinkClass, classify_link, k_sidedness, link_graph_of_pair
from .structures import (
    AlmostPerfect,
    CoverOutcome,
    EngineParams,
    Extremal,
    NotApplicable,
    Stalled,
    Tripartite,
    TripartiteCover,
    resplit,
)

TRACE_FIELDS = ("iter", "cover_vertices", "t", "leftover", "move", "gain")


@dataclass(frozen=True)
class Grown:
    cover: TripartiteCover
    gain: int


MoveResult = Union[Grown, Extremal, type(NotApplicable)]


def _at_least_sqrt(d: Fraction, eta: float) -> bool:
    # d >= sqrt(eta), compared exactly
    return d * d >= Fraction(eta)


def _finish(old: TripartiteCover, members, size: int, H: Hypergraph3, params: EngineParams):
    new = resplit(members, size, old.n)
    new.check(H)
    gain = new.size - old.size
    if gain < params.min_gain:
        return NotApplicable
    return Grown(new, gain)


def _pair_matching(k: int, pairs) -> list[tuple[int, int]]:
    """Disjoint member pairs via the min-degree subgraph and the greedy
    matching lemma."""
    G = nx.Graph()
    G.add_nodes_from(range(k))
    G.add_edges_from(pairs)
    return greedy_graph_matching(min_degree_subgraph(G))


def _link_classes(cover: TripartiteCover, H: Hypergraph3, eta: float) -> dict[tuple[int, int], LinkClass]:
    I = cover.leftover
    members = cover.members
    return {
        (i, j): classify_link(link_graph_of_pair(members[i], members[j], I, H, eta))
        for i, j in combinations(range(len(members)), 2)
    }


# -- two-sided members ---------------------------------------------------------------


def improve_two_sided(cover: TripartiteCover, H: Hypergraph3, params: EngineParams) -> MoveResult:
    eta = params.eta
    I = set(cover.leftover)
    if len(I) < 4 or not cover.members:
        return NotApplicable
    two_sided = [k for k, T in enumerate(cover.members) if k_sidedness(T, I, H, eta) >= 2]
    if 3 * cover.t * len(two_sided) <= eta * cover.size:
        return NotApplicable
    s = max(1, floor(eta * cover.t / 2))
    goal = eta * len(I) / 8
    members = list(cover.members)
    taken = 0
    for k in two_sided:
        if taken and taken >= goal:
            break
        T = members[k]
        if len(I) < 4 * s:
            break
        dense = [p for p, V in enumerate(T.classes) if pairs_density(H, V, I) >= 2 * Fraction(eta)]
        if len(dense) < 2:
            continue
        p, q = dense[:2]
        try:
            T1 = tripartite_from_pairs(H, T.classes[p], I, eta, size=s)
            if T1 is None:
                continue
            T2 = tripartite_from_pairs(H, T.classes[q], I - T1.vertices, eta, size=s)
        except DensityTooLow:
            continue
        if T2 is None:
            continue
        r = 3 - p - q
        discard = T.classes[r][:s]
        rest_size = T.t - s
        members[k] = T.without(T1.vertices | T2.vertices | set(discard)) if rest_size else None  # type: ignore[call-overload]
        members += [T1, T2]
        I = (I - T1.vertices - T2.vertices) | set(discard)
        taken += 4 * s
    if not taken:
        return NotApplicable
    return _finish(cover, [T for T in members if T is not None], s, H, params)


# -- links with a perfect matching or the (3,2,0) pattern ---------------------------------


def _extract_round(H, plan, I, eta):
    """Run a list of ``(X, Y, size)`` extractions against ``I``; returns the new
    members and the remaining leftover, or None if any step fails."""
    out = []
    for X, Y, size in plan:
        try:
            T = tripartite_from_product(H, X, Y, I, eta, size=size)
        except DensityTooLow:
            return None
        if T is None:
            return None
        out.append(T)
        I = I - T.vertices
    return out, I


def improve_by_links(cover: TripartiteCover, H: Hypergraph3, params: EngineParams) -> MoveResult:
    eta = params.eta
    members = list(cover.members)
    I = set(cover.leftover)
    if len(members) < 2 or not I:
        return NotApplicable
    classes = _link_classes(cover, H, eta)
    good = [ij for ij, c in classes.items() if c.kind in (PM_KIND, B320_KIND)]
    if not good or len(good) < params.pair_fraction * comb(len(members), 2):
        return NotApplicable
    t = cover.t
    s = max(1, floor(eta / 4 * log2(t))) if t > 1 else 1
    rounds = max(1, min(t // s, floor(eta * eta * t / 2 / s)))
    goal = eta * len(I) / 8
    taken = 0
    for i, j in _pair_matching(len(members), good):
        if taken and taken >= goal:
            break
        c = classes[(i, j)]
        Ti, Tj = members[i], members[j]
        if c.kind == PM_KIND:
            sigma = c.witness
            new: list[Tripartite] = []
            used: set[int] = set()
            J = I
            for _ in range(rounds):
                plan = [
                    (
                        [v for v in Ti.classes[p] if v not in used],
                        [v for v in Tj.classes[sigma[p]] if v not in used],
                        s,
                    )
                    for p in range(3)
                ]
                if any(len(X) < s or len(Y) < s for X, Y, _ in plan):
                    break
                res = _extract_round(H, plan, J, eta)
                if res is None:
                    break
                got, J = res
                new += got
                for T in got:
                    used |= T.vertices
            if not new:
                continue
            I = J
            taken += s * len(new)
            members[i] = Ti.without(used) if Ti.t > len(new) // 3 * s else None
            members[j] = Tj.without(used) if Tj.t > len(new) // 3 * s else None
            members += new
        else:
            # Case (3,2,0): the balanced sizes need three units per class
            if t < 3 * s:
                continue
            lp, rp = c.witness
            Ta, Tb = (Tj, Ti) if c.transposed else (Ti, Tj)
            A = [Ta.classes[lp[p]] for p in range(3)]
            B = [Tb.classes[rp[q]] for q in range(3)]
            plan = [(A[0], B[0], 2 * s), (A[1], B[2], 2 * s), (A[0], B[1], s), (A[1], B[1], s)]
            new = []
            J = I
            ok = True
            used = set()
            for X, Y, size in plan:
                X = [v for v in X if v not in used]
                Y = [v for v in Y if v not in used]
                res = _extract_round(H, [(X, Y, size)], J, eta)
                if res is None:
                    ok = False
                    break
                got, J = res
                new += got
                used |= got[0].vertices
            if not ok:
                continue
            discard = list(A[2][: 3 * s])
            used_a = used | set(discard)
            ka, kb = (j, i) if c.transposed else (i, j)
            members[ka] = Ta.without(used_a) if Ta.t > 3 * s else None
            members[kb] = Tb.without(used) if Tb.t > 2 * s else None
            members += new
            I = J | set(discard)
            taken += 6 * s
    if not taken:
        return NotApplicable
    return _finish(cover, [T for T in members if T is not None], s, H, params)


# -- (3,1,1) links: grow or certify ----------------------------------------------------


def weak_classes(cover: TripartiteCover, pairs, classes) -> tuple[set[int], list[tuple]]:
    """Union of the non-degree-3 classes over the paired members, and for each
    pair its ``(i, j, strong_i, strong_j)`` class indices."""
    U: set[int] = set()
    roles = []
    for i, j in pairs:
        lp, rp = classes[(i, j)].witness
        Ti, Tj = cover.members[i], cover.members[j]
        for p in (1, 2):
            U.update(Ti.classes[lp[p]])
            U.update(Tj.classes[rp[p]])
        roles.append((i, j, lp, rp))
    return U, roles


def improve_or_report_extremal(cover: TripartiteCover, H: Hypergraph3, params: EngineParams) -> MoveResult:
    eta, alpha = params.eta, params.alpha
    members = list(cover.members)
    I = set(cover.leftover)
    if len(members) < 2:
        return NotApplicable
    classes = _link_classes(cover, H, eta)
    iso = [ij for ij, c in classes.items() if c.kind == B311_KIND]
    need = (1 - 2 * eta**0.5) * comb(len(members), 2)
    if not iso or len(iso) < need:
        return NotApplicable
    pairs = _pair_matching(len(members), iso)
    U, roles = weak_classes(cover, pairs, classes)
    dense_inside = len(U) >= 3 and _at_least_sqrt(subset_density(H, U), eta)
    dense_to_I = len(I) >= 2 and bool(U) and _at_least_sqrt(pairs_density(H, U, I), eta)
    if dense_inside or dense_to_I:
        return _grow_from_weak(cover, H, params, roles)
    B = frozenset(U | I)
    if len(B) < 3 or len(B) < (Fraction(2, 3) - Fraction(alpha)) * H.n:
        return NotApplicable
    d = subset_density(H, B)
    if d >= Fraction(alpha):
        return NotApplicable
    return Extremal(B, d, cover)


def _grow_from_weak(cover, H, params, roles) -> MoveResult:
    """Cross extractions through the strong classes free one weak class per
    member; the freed vertices are then re-covered together with leftover
    vertices."""
    eta = params.eta
    t = cover.t
    s = 1 if t == 1 else max(1, floor(eta / 4 * log2(t)))
    members = list(cover.members)
    I = set(cover.leftover)
    for i, j, lp, rp in roles:
        Ti, Tj = members[i], members[j]
        if Ti is None or Tj is None or Ti.t < s:
            continue
        plan = [(Ti.classes[lp[0]], Tj.classes[rp[1]], s), (Ti.classes[lp[1]], Tj.classes[rp[0]], s)]
        res = _extract_round(H, plan, I, eta)
        if res is None:
            continue
        new, I = res
        used = set().union(*(T.vertices for T in new))
        freed = set(Ti.classes[lp[2]][:s]) | set(Tj.classes[rp[2]][:s])
        members[i] = Ti.without(used | freed) if Ti.t > s else None
        members[j] = Tj.without(used | freed) if Tj.t > s else None
        members += new
    staged = resplit([T for T in members if T is not None], s, cover.n)
    grown = greedy_tripartite_cover(H, staged.leftover, s, eta, base=staged)
    return _finish(cover, grown.members, s, H, params)


# -- driver ----------------------------------------------------------------------------

MOVES: tuple[tuple[str, Callable], ...] = (
    ("claim1", improve_two_sided),
    ("claim2", improve_by_links),
    ("claim3", improve_or_report_extremal),
)


def _account(H: Hypergraph3, cover: TripartiteCover) -> None:
    for S in (cover.leftover, cover.covered):
        degree_accounting(H, S)


def almost_perfect_matching(
    H: Hypergraph3, params: EngineParams = EngineParams(), trace: Optional[list] = None
) -> CoverOutcome:
    """Grow a tripartite cover until it leaves fewer than ``eta**2 * n``
    vertices, certifies extremality, or no move applies.

    ``trace`` collects one dict per iteration with keys ``TRACE_FIELDS``.
    """
    eta = params.eta
    cover = greedy_tripartite_cover(H, range(H.n), params.t, eta)
    history = [cover.size]
    for it in range(params.max_iterations):
        cover.check(H)
        _account(H, cover)
        left = cover.leftover
        if len(left) < eta * eta * H.n:
            if trace is not None:
                trace.append({"iter": it, "cover_vertices": cover.size, "t": cover.t, "leftover": len(left), "move": "none", "gain": 0})
            M = cover.matching()
            assert verify_matching(H, M)
            return AlmostPerfect(M, left, cover)
        row = {"iter": it, "cover_vertices": cover.size, "t": cover.t, "leftover": len(left), "move": "none", "gain": 0}
        for name, move in MOVES:
            res = move(cover, H, params)
            if res is NotApplicable:
                continue
            if isinstance(res, Extremal):
                if trace is not None:
                    trace.append({**row, "move": name})
                return _verified_extremal(H, res, params)
            new = greedy_tripartite_cover(H, res.cover.leftover, res.cover.t, eta, base=res.cover)
            new.check(H)
            assert new.size - cover.size >= params.min_gain
            row.update(move=name, gain=new.size - cover.size)
            cover = new
            history.append(cover.size)
            break
        if trace is not None:
            trace.append(row)
        if row["move"] == "none":
            return Stalled("no move applies", cover, it + 1, tuple(history), _densities(H, cover))
    return Stalled("iteration limit", cover, params.max_iterations, tuple(history), _densities(H, cover))


def _verified_extremal(H: Hypergraph3, res: Extremal, params: EngineParams) -> Extremal:
    d = subset_density(H, res.B)
    assert d == res.density and d < Fraction(params.alpha)
    assert len(res.B) >= (Fraction(2, 3) - Fraction(params.alpha)) * H.n
    return res


def _densities(H: Hypergraph3, cover: TripartiteCover) -> dict:
    I = cover.leftover
    out = {"leftover": len(I), "members": len(cover.members)}
    if len(I) >= 3:
        out["leftover_density"] = float(subset_density(H, I))
    return out
