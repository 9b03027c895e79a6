"""Closed-form degree threshold and its verification at small orders.

``exhaustive_verify_n6`` decides every one of the 2**20 3-graphs on six
vertices with the subset DP; ``sampled_verify`` gathers evidence at larger
orders from degree-conditioned random instances.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Optional

import numpy as np

from .constructions import random_min_degree
from .core import Hypergraph3, colex_triples, min_degree
from .errors import InvalidOrder
from .exact import NO_PM, PM, UNDECIDED, dp_over_masks, has_perfect_matching, max_matching_branch
from .io import write_hypergraph

CSV_FIELDS = ("n", "tau", "mode", "examined", "pm_count", "counterexamples", "runtime_ms")


def threshold(n: int) -> int:
    """``C(n-1, 2) - C(2n/3, 2) + 1``."""
    if n < 3 or n % 3:
        raise InvalidOrder(f"n must be a positive multiple of 3, got {n}")
    return comb(n - 1, 2) - comb(2 * n // 3, 2) + 1


@dataclass
class ThresholdReport:
    n: int
    formula: int
    mode: str  # "exhaustive" | "sampled"
    examined: int = 0
    pm_count: int = 0
    tau: Optional[int] = None
    verified_floor: Optional[int] = None
    verified_ceiling: Optional[int] = None
    floor_witness: Optional[Hypergraph3] = None
    counterexamples: list[Hypergraph3] = field(default_factory=list)
    undecided: int = 0
    runtime_ms: int = 0
    # exhaustive mode: graphs with minimum degree exactly d, and how many have a PM
    by_min_degree: dict[int, tuple[int, int]] = field(default_factory=dict)
    note: str = ""

    @property
    def exact_m1(self) -> Optional[int]:
        return self.verified_ceiling if self.mode == "exhaustive" else None

    @property
    def matches_formula(self) -> Optional[bool]:
        return None if self.exact_m1 is None else self.exact_m1 == self.formula

    def at_least(self, tau: int) -> tuple[int, int]:
        """(graphs with min degree >= tau, those among them with a PM)."""
        total = sum(c for d, (c, _) in self.by_min_degree.items() if d >= tau)
        pm = sum(p for d, (_, p) in self.by_min_degree.items() if d >= tau)
        return total, pm

    def csv_row(self) -> dict:
        return {
            "n": self.n,
            "tau": "" if self.tau is None else self.tau,
            "mode": self.mode,
            "examined": self.examined,
            "pm_count": self.pm_count,
            "counterexamples": len(self.counterexamples),
            "runtime_ms": self.runtime_ms,
        }


# -- exhaustive n = 6 ------------------------------------------------------------

_T6 = [(1 << int(a)) | (1 << int(b)) | (1 << int(c)) for a, b, c in colex_triples(6)]
_INC6 = [[i for i, t in enumerate(_T6) if t >> v & 1] for v in range(6)]
_VMASK6 = [sum(1 << i for i in _INC6[v]) for v in range(6)]


def _scan_n6(bounds: tuple[int, int]) -> tuple[list[int], list[int], int, int]:
    """DP over every edge mask in ``[lo, hi)``.

    Returns per-min-degree totals and PM counts, plus the largest min degree of
    a graph without a PM and the first mask attaining it.
    """
    lo, hi = bounds
    total = [0] * 11
    pm = [0] * 11
    floor, floor_mask = -1, -1
    for g in range(lo, hi):
        d = min((g & vm).bit_count() for vm in _VMASK6)
        incident = [[_T6[i] for i in _INC6[v] if g >> i & 1] for v in range(6)]
        size, _ = dp_over_masks(6, incident)
        total[d] += 1
        if size == 2:
            pm[d] += 1
        elif d > floor:
            floor, floor_mask = d, g
    return total, pm, floor, floor_mask


def _split(total: int, parts: int) -> list[tuple[int, int]]:
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def vectorized_n6_tally() -> tuple[list[int], list[int]]:
    """Independent tally: a 6-vertex graph has a PM iff it contains both
    triples of some complementary pair."""
    g = np.arange(1 << 20, dtype=np.uint32)
    degs = np.stack([np.bitwise_count(g & np.uint32(vm)) for vm in _VMASK6])
    d = degs.min(axis=0)
    has_pm = np.zeros(g.size, dtype=bool)
    for i, t in enumerate(_T6):
        j = _T6.index(0b111111 ^ t)
        if i < j:
            pair = np.uint32((1 << i) | (1 << j))
            has_pm |= (g & pair) == pair
    total = np.bincount(d, minlength=11)
    pm = np.bincount(d[has_pm], minlength=11)
    return total.tolist(), pm.tolist()


def exhaustive_verify_n6(workers: int = 1, chunks: int = 16, cross_check: bool = True) -> ThresholdReport:
    """Compute ``m_1(3, 6)`` exactly by deciding all 2**20 graphs."""
    start = time.perf_counter()
    ranges = _split(1 << 20, max(chunks, workers))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_scan_n6, ranges))
    else:
        parts = [_scan_n6(r) for r in ranges]
    total = [sum(p[0][d] for p in parts) for d in range(11)]
    pm = [sum(p[1][d] for p in parts) for d in range(11)]
    floor, floor_mask = -1, -1
    for _, _, f, fm in parts:  # ranges are ascending, so ties keep the first mask
        if f > floor:
            floor, floor_mask = f, fm
    report = ThresholdReport(
        n=6,
        formula=threshold(6),
        mode="exhaustive",
        examined=sum(total),
        pm_count=sum(pm),
        verified_floor=floor,
        verified_ceiling=floor + 1,
        floor_witness=Hypergraph3(6, floor_mask),
        by_min_degree={d: (total[d], pm[d]) for d in range(11) if total[d]},
    )
    if cross_check:
        vt, vp = vectorized_n6_tally()
        if (vt, vp) != (total, pm):
            raise AssertionError("DP and complementary-pair tallies disagree")
        report.note = "DP tally matches complementary-pair tally"
    report.runtime_ms = int(1000 * (time.perf_counter() - start))
    return report


# -- sampled evidence ---------------------------------------------------------------


def _decide_sample(args) -> tuple[int, str, Optional[str]]:
    n, tau, seed = args
    H = random_min_degree(n, tau, seed)
    if min_degree(H) < tau:
        raise AssertionError(f"sampler violated its degree floor (seed {seed})")
    verdict = has_perfect_matching(H)
    text = write_hypergraph(H) if verdict.status == NO_PM else None
    return seed, verdict.status, text


def sampled_verify(
    n: int,
    tau: int,
    samples: int,
    seed: int,
    workers: int = 1,
    persist_dir: Optional[Path] = None,
) -> ThresholdReport:
    """Check ``samples`` instances of ``random_min_degree(n, tau, seed + i)``.

    This is evidence, not proof.  Any graph without a PM is re-decided by the
    branch search and written to ``persist_dir`` when given.
    """
    if n % 3:
        raise InvalidOrder(f"n = {n} is not a multiple of 3")
    start = time.perf_counter()
    jobs = [(n, tau, seed + i) for i in range(samples)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_decide_sample, jobs, chunksize=16))
    else:
        results = [_decide_sample(j) for j in jobs]
    report = ThresholdReport(n=n, formula=threshold(n), mode="sampled", tau=tau, examined=samples)
    from .io import parse_hypergraph

    for s, status, text in results:
        if status == PM:
            report.pm_count += 1
        elif status == UNDECIDED:
            report.undecided += 1
        else:
            H = parse_hypergraph(text)
            recheck = max_matching_branch(H, budget=10**7)
            if not (recheck.exact and recheck.size < n // 3):
                raise AssertionError(f"counterexample at seed {s} does not re-verify")
            report.counterexamples.append(H)
            if persist_dir is not None:
                persist_dir.mkdir(parents=True, exist_ok=True)
                (persist_dir / f"counterexample_n{n}_tau{tau}_seed{s}.hm3").write_text(text)
    if report.counterexamples:
        report.verified_floor = max(min_degree(H) for H in report.counterexamples)
    else:
        report.verified_ceiling = tau
    report.note = "sampled evidence, not proof"
    report.runtime_ms = int(1000 * (time.perf_counter() - start))
    return report
