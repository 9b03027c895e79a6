"""Instance generators: the extremal example, its matchable variant, and seeded
random families used by the experiments."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np

from .core import Hypergraph3, colex_triples
from .errors import InvalidOrder

KINDS = ("extremal", "extremal-plus", "random", "min-degree-random", "perturbed-extremal")


def _check_order(n: int) -> None:
    if n < 6 or n % 3:
        raise InvalidOrder(f"n must be a multiple of 3 and at least 6, got {n}")


def _meets(n: int, A_size: int) -> np.ndarray:
    # A is the prefix {0..A_size-1}; a triple meets A iff its smallest vertex does
    return colex_triples(n)[:, 0] < A_size


def extremal_construction(n: int) -> tuple[Hypergraph3, frozenset, frozenset]:
    """All triples meeting ``A = {0, ..., n/3 - 2}``; no perfect matching."""
    _check_order(n)
    k = n // 3 - 1
    H = Hypergraph3.from_mask(n, _meets(n, k))
    return H, frozenset(range(k)), frozenset(range(k, n))


def extremal_plus(n: int) -> Hypergraph3:
    """Like :func:`extremal_construction` but with ``|A| = n/3``."""
    _check_order(n)
    return Hypergraph3.from_mask(n, _meets(n, n // 3))


def extremal_plus_parts(n: int) -> tuple[frozenset, frozenset]:
    _check_order(n)
    return frozenset(range(n // 3)), frozenset(range(n // 3, n))


def random_3graph(n: int, p: float, seed: int) -> Hypergraph3:
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    return Hypergraph3.from_mask(n, rng.random(comb(n, 3)) < p)


def random_min_degree(n: int, tau: int, seed: int, p: Optional[float] = None) -> Hypergraph3:
    """Random 3-graph with minimum vertex degree at least ``tau``.

    A base graph is drawn at density ``p`` (default ``tau / C(n-1, 2)``), then
    every deficient vertex, in increasing order, receives uniformly chosen
    missing incident triples until its degree reaches ``tau``.
    """
    full = comb(n - 1, 2)
    if tau > full:
        raise ValueError(f"tau = {tau} exceeds C(n-1, 2) = {full}")
    if p is None:
        p = max(tau, 0) / full
    rng = np.random.default_rng(seed)
    present = rng.random(comb(n, 3)) < p
    triples = colex_triples(n)
    degrees = np.bincount(triples[present].ravel(), minlength=n)
    for v in range(n):
        deficit = tau - int(degrees[v])
        if deficit <= 0:
            continue
        through_v = np.flatnonzero((triples == v).any(axis=1) & ~present)
        chosen = rng.choice(through_v, size=deficit, replace=False)
        present[chosen] = True
        np.add.at(degrees, triples[chosen].ravel(), 1)
    return Hypergraph3.from_mask(n, present)


def perturbed_extremal(n: int, flips: int, seed: int) -> Hypergraph3:
    """:func:`extremal_plus` with ``flips`` distinct random triples toggled."""
    base = extremal_plus(n)
    N = comb(n, 3)
    if not 0 <= flips <= N:
        raise ValueError(f"flips must lie in [0, {N}]")
    if flips == 0:
        return base
    rng = np.random.default_rng(seed)
    return base.toggled(rng.choice(N, size=flips, replace=False))


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    p: float = 0.5
    tau: int = 0
    flips: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        if self.kind in ("extremal", "extremal-plus", "perturbed-extremal"):
            _check_order(self.n)

    def build(self) -> Hypergraph3:
        if self.kind == "extremal":
            return extremal_construction(self.n)[0]
        if self.kind == "extremal-plus":
            return extremal_plus(self.n)
        if self.kind == "random":
            return random_3graph(self.n, self.p, self.seed)
        if self.kind == "min-degree-random":
            return random_min_degree(self.n, self.tau, self.seed)
        return perturbed_extremal(self.n, self.flips, self.seed)

