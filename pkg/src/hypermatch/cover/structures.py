"""Data types shared by the cover engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from ..core import Hypergraph3, Matching


def vmask(S) -> int:
    m = 0
    for v in S:
        m |= 1 << v
    return m


def mask_vertices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Tripartite:
    """Three disjoint classes of equal size; each stored as a sorted tuple."""

    classes: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    def __post_init__(self):
        cls = tuple(tuple(sorted(c)) for c in self.classes)
        if len(cls) != 3:
            raise ValueError("a tripartite graph has exactly three classes")
        sizes = {len(c) for c in cls}
        if len(sizes) != 1 or 0 in sizes:
            raise ValueError(f"classes must be nonempty and equal in size, got {[len(c) for c in cls]}")
        flat = [v for c in cls for v in c]
        if len(set(flat)) != len(flat):
            raise ValueError("classes overlap")
        object.__setattr__(self, "classes", cls)

    @property
    def t(self) -> int:
        return len(self.classes[0])

    @property
    def vertices(self) -> frozenset:
        return frozenset(v for c in self.classes for v in c)

    def is_complete(self, H: Hypergraph3) -> bool:
        V1, V2, V3 = self.classes
        need = vmask(V3)
        return all(H.pair_neighbours(x, y) & need == need for x in V1 for y in V2)

    def edges(self) -> list[tuple[int, int, int]]:
        """``t`` disjoint transversal edges covering the member."""
        return [tuple(sorted(e)) for e in zip(*self.classes)]

    def split(self, size: int) -> tuple[list["Tripartite"], list[int]]:
        """Chop into members of class size ``size``; returns the pieces and the
        vertices left over."""
        k = self.t // size
        pieces = [
            Tripartite(tuple(c[i * size:(i + 1) * size] for c in self.classes))  # type: ignore[arg-type]
            for i in range(k)
        ]
        rest = [v for c in self.classes for v in c[k * size:]]
        return pieces, rest

    def without(self, removed) -> "Tripartite":
        removed = set(removed)
        return Tripartite(tuple(tuple(v for v in c if v not in removed) for c in self.classes))  # type: ignore[arg-type]


@dataclass(frozen=True)
class TripartiteCover:
    n: int
    t: int
    members: tuple[Tripartite, ...] = ()

    @property
    def covered(self) -> frozenset:
        return frozenset(v for T in self.members for v in T.vertices)

    @property
    def size(self) -> int:
        return 3 * self.t * len(self.members)

    @property
    def leftover(self) -> frozenset:
        return frozenset(range(self.n)) - self.covered

    def matching(self) -> Matching:
        return Matching(tuple(e for T in self.members for e in T.edges()))

    def check(self, H: Hypergraph3) -> None:
        """Raise AssertionError unless the cover is valid for ``H``."""
        seen: set[int] = set()
        for T in self.members:
            assert T.t == self.t, f"member class size {T.t} != {self.t}"
            assert seen.isdisjoint(T.vertices), "members overlap"
            seen |= T.vertices
            assert T.is_complete(H), f"member {T.classes} is not complete"
        assert all(0 <= v < self.n for v in seen)
        assert len(seen) + len(self.leftover) == self.n


def resplit(members, size: int, n: int) -> TripartiteCover:
    """Uniform cover of class size ``size``; remainders fall back to the leftover."""
    out: list[Tripartite] = []
    for T in members:
        pieces, _ = T.split(size)
        out.extend(pieces)
    return TripartiteCover(n, size, tuple(out))


@dataclass(frozen=True)
class EngineParams:
    eta: float = 0.05
    alpha: float = 0.3
    t: int = 1
    seed: int = 0
    max_iterations: int = 1000
    min_gain: int = 1
    # share of member pairs that must qualify before a link move fires
    link_fraction: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.eta < self.alpha < 1:
            raise ValueError(f"need 0 < eta < alpha < 1, got eta={self.eta}, alpha={self.alpha}")
        if self.t < 1:
            raise ValueError("t must be at least 1")

    @property
    def pair_fraction(self) -> float:
        return self.eta if self.link_fraction is None else self.link_fraction


@dataclass(frozen=True)
class AlmostPerfect:
    matching: Matching
    uncovered: frozenset
    cover: TripartiteCover


@dataclass(frozen=True)
class Extremal:
    B: frozenset
    density: Fraction
    cover: TripartiteCover


@dataclass(frozen=True)
class Stalled:
    reason: str
    cover: TripartiteCover
    iterations: int
    history: tuple[int, ...] = ()
    densities: dict = field(default_factory=dict)

    @property
    def matching(self) -> Matching:
        return self.cover.matching()


CoverOutcome = Union[AlmostPerfect, Extremal, Stalled]


class _NotApplicable:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NotApplicable"

    def __bool__(self) -> bool:
        return False


NotApplicable = _NotApplicable()
