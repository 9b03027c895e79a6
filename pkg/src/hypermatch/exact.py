"""Exact maximum-matching solvers used as oracles.

``max_matching_dp`` is a memoized recursion over vertex subsets.
``max_matching_branch`` is a fail-first branch-and-bound that scales further
and reports whether it finished within its node budget.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Optional

from .core import Hypergraph3, Matching, verify_matching
from .errors import InvalidOrder, OrderTooLarge

DP_LIMIT = 24

PM = "pm"
NO_PM = "no-pm"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class MatchingResult:
    size: int
    witness: Matching
    exact: bool = True
    nodes: int = 0


@dataclass(frozen=True)
class PMVerdict:
    status: str  # PM | NO_PM | UNDECIDED
    witness: Optional[Matching] = None
    note: str = ""
    max_size: Optional[int] = None

    @property
    def decided(self) -> bool:
        return self.status != UNDECIDED

    def __bool__(self) -> bool:
        return self.status == PM


def _mask_to_triple(mask: int) -> tuple[int, int, int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)  # type: ignore[return-value]


def dp_over_masks(n: int, incident) -> tuple[int, list[int]]:
    """Maximum matching in the hypergraph given by per-vertex incident edge
    masks.  Returns the size and the chosen edge masks."""
    memo: dict[int, int] = {0: 0}

    def f(mask: int) -> int:
        r = memo.get(mask)
        if r is not None:
            return r
        low = mask & -mask
        v = low.bit_length() - 1
        cap = mask.bit_count() // 3
        best = 0
        for e in incident[v]:
            if e & mask == e:
                val = 1 + f(mask ^ e)
                if val > best:
                    best = val
                    if best == cap:
                        break
        if best < cap:
            best = max(best, f(mask ^ low))
        memo[mask] = best
        return best

    full = (1 << n) - 1
    size = f(full)
    chosen: list[int] = []
    mask, need = full, size
    while need:
        low = mask & -mask
        v = low.bit_length() - 1
        for e in incident[v]:
            if e & mask == e and 1 + f(mask ^ e) == need:
                chosen.append(e)
                mask ^= e
                need -= 1
                break
        else:
            mask ^= low
    return size, chosen


def max_matching_dp(H: Hypergraph3) -> MatchingResult:
    if H.n > DP_LIMIT:
        raise OrderTooLarge(f"n = {H.n} exceeds the DP limit {DP_LIMIT}")
    incident = [H.incident_masks(v) for v in range(H.n)]
    size, chosen = dp_over_masks(H.n, incident)
    witness = Matching(tuple(_mask_to_triple(e) for e in chosen))
    assert verify_matching(H, witness), "DP produced an invalid witness"
    return MatchingResult(size, witness)


class _Budget(Exception):
    pass


def _greedy_cover(live: dict[int, list[int]]) -> int:
    """Greedy vertex cover (as a bitmask) of the live edges."""
    counts = {v: len(es) for v, es in live.items()}
    gone: set[int] = set()
    cover = 0
    while True:
        v = max(counts, key=lambda u: (counts[u], -u), default=None)
        if v is None or counts[v] == 0:
            return cover
        cover |= 1 << v
        for e in live[v]:
            if e in gone:
                continue
            gone.add(e)
            m = e
            while m:
                low = m & -m
                counts[low.bit_length() - 1] -= 1
                m ^= low
        del counts[v]


FRESH_COVER_LIMIT = 6000


def max_matching_branch(
    H: Hypergraph3, budget: int = 200_000, target: Optional[int] = None
) -> MatchingResult:
    """Branch-and-bound on the lowest-degree uncovered vertex.

    Each node either matches the branching vertex into one of its live edges,
    tried in order of increasing partner degree, or discards it.  Nodes are pruned with ``alive // 3`` and with the size of a
    vertex cover of the live edges: every matching edge hits the cover in a
    distinct vertex.  A cover of a node stays a cover of its children, so it is
    inherited and only recomputed while the live graph is small.

    The search stops early once ``target`` edges are found.  ``exact`` is true
    only when the returned size is certified maximum.
    """
    n = H.n
    incident = [H.incident_masks(v) for v in range(n)]
    goal = n // 3 if target is None else min(target, n // 3)
    best: list[int] = []
    current: list[int] = []
    nodes = 0

    def search(alive: int, cover: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        live: dict[int, list[int]] = {}
        size = 0
        m = alive
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            es = [e for e in incident[v] if e & alive == e]
            if es:
                live[v] = es
                size += len(es)
            else:
                alive ^= low
        if len(current) > len(best):
            best = list(current)
        if len(best) >= goal or not live:
            return
        cover &= alive
        bound = min(alive.bit_count() // 3, cover.bit_count())
        fresh = size > 3 * FRESH_COVER_LIMIT

        def pruned() -> bool:
            nonlocal bound, cover, fresh
            if len(current) + bound > len(best) and not fresh:
                fresh = True
                c = _greedy_cover(live)
                if c.bit_count() < cover.bit_count():
                    cover = c
                    bound = min(bound, c.bit_count())
            return len(current) + bound <= len(best)

        if pruned():
            return
        v = min(live, key=lambda u: (len(live[u]), u))

        def partner_degree(e: int) -> int:
            return sum(len(live[u]) for u in _mask_to_triple(e))

        for e in sorted(live[v], key=partner_degree):
            current.append(e)
            search(alive ^ e, cover)
            current.pop()
            if len(best) >= goal or pruned():
                return
        search(alive ^ (1 << v), cover)

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * n + 100))
    finished = True
    full = (1 << n) - 1
    try:
        root_live = {v: list(incident[v]) for v in range(n) if incident[v]}
        search(full, _greedy_cover(root_live))
    except _Budget:
        finished = False
    finally:
        sys.setrecursionlimit(limit)
    # stopping at a user target below n/3 proves nothing about optimality
    exact = len(best) == n // 3 or (finished and len(best) < goal)
    witness = Matching(tuple(_mask_to_triple(e) for e in best))
    assert verify_matching(H, witness), "branch search produced an invalid witness"
    return MatchingResult(len(best), witness, exact, nodes)


def has_perfect_matching(H: Hypergraph3, budget: int = 2_000_000) -> PMVerdict:
    """Decide whether ``H`` has a perfect matching.

    Uses the DP for ``n <= 24`` and the branch search otherwise; an exhausted
    search yields ``UNDECIDED``, never ``NO_PM``.
    """
    if H.n % 3:
        raise InvalidOrder(f"n = {H.n} is not a multiple of 3")
    k = H.n // 3
    if H.n <= DP_LIMIT:
        res = max_matching_dp(H)
    else:
        res = max_matching_branch(H, budget=budget, target=k)
        if not res.exact:
            return PMVerdict(UNDECIDED, note=f"search budget exhausted at size {res.size}", max_size=res.size)
    if res.size == k:
        assert verify_matching(H, res.witness, perfect=True)
        return PMVerdict(PM, res.witness, max_size=k)
    return PMVerdict(NO_PM, note=f"maximum matching has {res.size} edges", max_size=res.size)
