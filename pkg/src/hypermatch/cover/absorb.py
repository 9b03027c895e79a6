"""Absorbing matchings: a few edges that can swallow small leftover sets.

An edge ``e`` absorbs a 3-set ``W`` when the six vertices of ``e`` and ``W``
split into two disjoint edges of the host.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import ceil
from typing import Optional

import numpy as np

from ..core import Hypergraph3, Matching, verify_matching
from ..errors import AbsorptionFailed, EmptyGraph


def absorbing_split(H: Hypergraph3, e, W) -> Optional[tuple[tuple, tuple]]:
    """Two disjoint edges covering ``e | W``, or None."""
    six = sorted(set(e) | set(W))
    if len(six) != 6:
        return None
    first, rest = six[0], six[1:]
    for pair in combinations(rest, 2):
        one = (first, *pair)
        other = tuple(v for v in rest if v not in pair)
        if H.has_edge(*one) and H.has_edge(*other):
            return one, other
    return None


def absorbs(H: Hypergraph3, e, W) -> bool:
    return absorbing_split(H, e, W) is not None


@dataclass(frozen=True)
class AbsorbingMatching:
    M: Matching
    # probe 3-set -> index into M.edges of an edge absorbing it
    absorber_index: dict = field(default_factory=dict)


def _random_triples(rng, pool: list[int], count: int) -> list[tuple[int, int, int]]:
    if len(pool) < 3:
        return []
    return [tuple(sorted(int(v) for v in rng.choice(pool, 3, replace=False))) for _ in range(count)]


def build_absorbing_matching(
    H: Hypergraph3, cap: int = 1, probe_count: int = 100, candidates: int = 256, seed: int = 0
) -> AbsorbingMatching:
    """Greedy absorbing matching of at most ``cap`` edges.

    Each round samples up to ``candidates`` edges avoiding the matching so
    far and keeps the one absorbing the most of ``probe_count`` seeded random
    3-sets (ties: the earlier sampled edge).
    """
    if H.m == 0:
        raise EmptyGraph("no edges to build an absorbing matching from")
    cap = max(1, cap)
    rng = np.random.default_rng(seed)
    probes = _random_triples(rng, list(range(H.n)), probe_count)
    chosen: list[tuple[int, int, int]] = []
    used: set[int] = set()
    E = H.edge_array
    for _ in range(cap):
        ok = ~np.isin(E, list(used)).any(axis=1) if used else np.ones(len(E), dtype=bool)
        pool = np.flatnonzero(ok)
        if pool.size == 0:
            break
        picks = pool if pool.size <= candidates else np.sort(rng.choice(pool, candidates, replace=False))
        best, best_score = None, -1
        for r in picks:
            e = tuple(int(v) for v in E[r])
            score = sum(1 for W in probes if set(W).isdisjoint(e) and not used & set(W) and absorbs(H, e, W))
            if score > best_score:
                best, best_score = e, score
        chosen.append(best)
        used |= set(best)
    M = Matching(tuple(chosen))
    assert verify_matching(H, M)
    index = {}
    for W in probes:
        if used & set(W):
            continue
        for i, e in enumerate(M.edges):
            if absorbs(H, e, W):
                index[W] = i
                break
    return AbsorbingMatching(M, index)


def absorb_leftover(H: Hypergraph3, AM: AbsorbingMatching, W, partial: Matching = Matching()) -> Matching:
    """Matching covering ``covered(partial) | V(M) | W``.

    ``W`` is cut into 3-sets, each swallowed by a distinct edge of ``M``
    (searched by backtracking).  Raises AbsorptionFailed when no assignment
    exists.
    """
    W = sorted(set(W))
    if len(W) % 3:
        raise ValueError(f"|W| = {len(W)} is not a multiple of 3")
    VM = AM.M.covered
    if set(W) & VM or set(W) & partial.covered:
        raise ValueError("W must avoid the absorbing matching and the partial matching")
    absorbers = list(AM.M.edges)
    if len(W) // 3 > len(absorbers):
        raise AbsorptionFailed(tuple(W[:3]), f"{len(W) // 3} triples but only {len(absorbers)} absorbers")
    replaced: dict[int, tuple[tuple, tuple]] = {}
    blocked: list[tuple] = []

    def solve(rest: list[int]) -> bool:
        if not rest:
            return True
        first = rest[0]
        for pair in combinations(rest[1:], 2):
            S = (first, *pair)
            left = [v for v in rest if v not in S]
            for i, e in enumerate(absorbers):
                if i in replaced:
                    continue
                split = absorbing_split(H, e, S)
                if split is None:
                    continue
                replaced[i] = split
                if solve(left):
                    return True
                del replaced[i]
            if not blocked:
                blocked.append(S)
        return False

    if not solve(W):
        raise AbsorptionFailed(blocked[0] if blocked else tuple(W[:3]))
    edges = list(partial.edges)
    for i, e in enumerate(absorbers):
        edges.extend(replaced[i] if i in replaced else (e,))
    out = Matching(tuple(edges))
    verdict = verify_matching(H, out)
    if not verdict:
        raise AssertionError(f"absorption produced an invalid matching: {verdict.detail}")
    assert out.covered == partial.covered | VM | set(W)
    return out


def absorption_rate(H: Hypergraph3, AM: AbsorbingMatching, trials: int, seed: int) -> tuple[int, int]:
    """Absorb ``trials`` random 3-sets disjoint from ``V(M)``, one at a time.

    Returns ``(successes, trials)``; every success is verified.
    """
    rng = np.random.default_rng(seed)
    pool = sorted(set(range(H.n)) - AM.M.covered)
    ok = 0
    for W in _random_triples(rng, pool, trials):
        try:
            absorb_leftover(H, AM, W)
        except AbsorptionFailed:
            continue
        ok += 1
    return ok, trials


def default_cap(eta: float, n: int) -> int:
    return max(1, ceil(eta**3 * n))
