"""Text formats for hypergraphs and matchings.

Hypergraph files::

    c optional comment lines
    p hm3 <n> <m>
    e <u> <v> <w>        (m lines, 1-indexed)

Matching (witness) files drop the header and start with ``s PERFECT <k>`` or
``s MAXIMUM <k>``.
"""

from __future__ import annotations

from math import comb

from .core import Hypergraph3, Matching, triple_rank
from .errors import (
    DuplicateEdge,
    DuplicateVertexInEdge,
    EdgeCountMismatch,
    MalformedHeader,
    MalformedLine,
    VertexOutOfRange,
)


def _ints(parts, lineno):
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise MalformedLine(lineno, f"expected integers, got {' '.join(parts)!r}") from None


def _edge(parts, lineno, n):
    if len(parts) != 4:
        raise MalformedLine(lineno, "edge lines have the form 'e u v w'")
    verts = _ints(parts[1:], lineno)
    if len(set(verts)) != 3:
        raise DuplicateVertexInEdge(lineno, f"repeated vertex in {verts}")
    for v in verts:
        if v < 1 or (n is not None and v > n):
            raise VertexOutOfRange(lineno, f"vertex {v} not in 1..{n or 'n'}")
    return tuple(sorted(v - 1 for v in verts))


def parse_hypergraph(text: str) -> Hypergraph3:
    n = m = None
    seen: dict[int, int] = {}
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        last = lineno
        if parts[0] == "p":
            if n is not None:
                raise MalformedHeader(lineno, "second header line")
            if len(parts) != 4 or parts[1] != "hm3":
                raise MalformedHeader(lineno, "expected 'p hm3 <n> <m>'")
            n, m = _ints(parts[2:], lineno)
            if n < 3 or not 0 <= m <= comb(n, 3):
                raise MalformedHeader(lineno, f"impossible header n={n} m={m}")
        elif parts[0] == "e":
            edge = _edge(parts, lineno, n)
            if n is None:
                raise MalformedHeader(lineno, "edge line before the 'p hm3' header")
            r = triple_rank(*edge)
            if r in seen:
                raise DuplicateEdge(lineno, f"edge already given on line {seen[r]}")
            seen[r] = lineno
        else:
            raise MalformedLine(lineno, f"unknown line type {parts[0]!r}")
    if n is None:
        raise MalformedHeader(last + 1, "missing 'p hm3' header")
    if len(seen) != m:
        raise EdgeCountMismatch(last, f"header declares {m} edges, found {len(seen)}")
    return Hypergraph3.from_ranks(n, seen)


def write_hypergraph(H: Hypergraph3) -> str:
    lines = [f"p hm3 {H.n} {H.m}"]
    lines += [f"e {a + 1} {b + 1} {c + 1}" for a, b, c in H.edges()]
    return "\n".join(lines) + "\n"


def write_matching(M: Matching, perfect: bool) -> str:
    kind = "PERFECT" if perfect else "MAXIMUM"
    lines = [f"s {kind} {len(M)}"]
    lines += [f"e {a + 1} {b + 1} {c + 1}" for a, b, c in M.canonical().edges]
    return "\n".join(lines) + "\n"


def parse_matching(text: str) -> tuple[Matching, bool]:
    """Returns the matching and whether the file claims it is perfect."""
    kind = None
    size = None
    edges = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if kind is not None or len(parts) != 3 or parts[1] not in ("PERFECT", "MAXIMUM"):
                raise MalformedHeader(lineno, "expected 's PERFECT|MAXIMUM <size>'")
            kind = parts[1]
            size = _ints(parts[2:], lineno)[0]
        elif parts[0] == "e":
            if kind is None:
                raise MalformedHeader(lineno, "edge line before the 's' line")
            edges.append(_edge(parts, lineno, None))
        else:
            raise MalformedLine(lineno, f"unknown line type {parts[0]!r}")
    if kind is None:
        raise MalformedHeader(1, "missing 's' line")
    if size != len(edges):
        raise EdgeCountMismatch(lineno, f"declared {size} edges, found {len(edges)}")
    return Matching(tuple(edges)), kind == "PERFECT"
