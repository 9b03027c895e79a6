from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from hypermatch.constructions import extremal_construction, random_3graph
from hypermatch.core import (
    Hypergraph3,
    Matching,
    cross_density_pairs,
    cross_density_product,
    degree_accounting,
    degree_profile,
    subset_density,
    triple_rank,
    triple_unrank,
    verify_matching,
)
from hypermatch.errors import InvalidTriple, SetsNotDisjoint, SubsetTooSmall

from oracles import brute_cross_pairs, brute_degrees, brute_inside, brute_transversal


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(3, max_n))
    p = draw(st.sampled_from([0.0, 0.1, 0.3, 0.5, 0.8, 1.0]))
    return random_3graph(n, p, draw(st.integers(0, 2**32)))


def test_rank_examples():
    assert triple_rank(0, 1, 2) == 0
    assert triple_rank(0, 1, 3) == 1
    assert triple_rank(1, 2, 3) == 3


@pytest.mark.parametrize("bad", [(1, 0, 2), (0, 0, 1), (-1, 0, 1), (2, 1, 0)])
def test_rank_rejects_unsorted(bad):
    with pytest.raises(InvalidTriple):
        triple_rank(*bad)


def test_rank_round_trip_n12():
    ranks = [triple_rank(*t) for t in combinations(range(12), 3)]
    assert sorted(ranks) == list(range(comb(12, 3)))
    for t in combinations(range(12), 3):
        assert triple_unrank(triple_rank(*t)) == t


def test_edges_are_in_range_and_m_is_popcount():
    H = random_3graph(10, 0.4, 1)
    assert H.m == bin(H.bits).count("1")
    assert H.bits < 1 << comb(10, 3)
    assert all(0 <= a < b < c < 10 for a, b, c in H.edges())


def test_degree_profile_examples():
    P = degree_profile(Hypergraph3.complete(6))
    assert set(P.degrees) == {10} and P.min_degree == 10
    assert set(degree_profile(Hypergraph3.empty(7)).degrees) == {0}
    H, A, B = extremal_construction(9)
    P = degree_profile(H)
    assert P.min_degree == comb(8, 2) - comb(6, 2) == 13
    assert set(P.argmin()) == set(B)


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_degree_sum(H):
    deg = degree_profile(H).degrees
    assert sum(deg) == 3 * H.m
    assert list(deg) == brute_degrees(H.n, H.edges())


def test_subset_density_examples():
    assert subset_density(Hypergraph3.complete(8), {1, 4, 6}) == 1
    H, A, B = extremal_construction(9)
    assert subset_density(H, B) == 0
    H = random_3graph(12, 0.5, 7)
    assert subset_density(H, range(12)) == Fraction(len(H.edges()), 220)
    with pytest.raises(SubsetTooSmall):
        subset_density(H, {0, 1})


@settings(max_examples=100, deadline=None)
@given(graphs(), st.data())
def test_subset_density_counts_inside(H, data):
    U = data.draw(st.sets(st.integers(0, H.n - 1), min_size=3))
    d = subset_density(H, U) * comb(len(U), 3)
    assert d.denominator == 1 and d.numerator == brute_inside(H.edges(), U)


def test_cross_density_pairs_examples():
    H, A, B = extremal_construction(9)
    assert cross_density_pairs(H, A, B) == 1
    assert cross_density_pairs(Hypergraph3.empty(9), A, B) == 0
    H = random_3graph(12, 0.5, 7)
    A, B = set(range(4)), set(range(4, 12))
    assert cross_density_pairs(H, A, B) == Fraction(brute_cross_pairs(H.edges(), A, B), 4 * comb(8, 2))
    with pytest.raises(SetsNotDisjoint):
        cross_density_pairs(H, {0, 1}, {1, 2, 3})


def test_cross_density_product_examples():
    parts = ({0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11})
    assert cross_density_product(Hypergraph3.complete(12), *parts) == 1
    inside_only = Hypergraph3.from_edges(12, [(0, 1, 2), (4, 5, 6)])
    assert cross_density_product(inside_only, *parts) == 0
    H = random_3graph(12, 0.5, 7)
    assert cross_density_product(H, *parts) == Fraction(brute_transversal(H.edges(), *parts), 64)
    with pytest.raises(SetsNotDisjoint):
        cross_density_product(H, {0}, {0, 1}, {2})


def test_degree_accounting_examples():
    H, A, B = extremal_construction(9)
    assert degree_accounting(H, B) == (7, 42, 0)
    assert 7 + 2 * 42 == 7 * 13
    assert degree_accounting(H, range(9)) == (0, 0, H.m)
    assert degree_accounting(H, set()) == (0, 0, 0)


@settings(max_examples=200, deadline=None)
@given(graphs(), st.data())
def test_degree_accounting_identity(H, data):
    S = data.draw(st.sets(st.integers(0, H.n - 1)))
    e1, e2, e3 = degree_accounting(H, S)
    deg = brute_degrees(H.n, H.edges())
    assert sum(deg[v] for v in S) == e1 + 2 * e2 + 3 * e3
    hits = [len(set(e) & S) for e in H.edges()]
    assert (e1, e2, e3) == (hits.count(1), hits.count(2), hits.count(3))


def test_verify_matching_clauses():
    K = Hypergraph3.complete(6)
    M = Matching(((0, 1, 2), (3, 4, 5)))
    assert verify_matching(K, M, perfect=True)
    v = verify_matching(K.with_edges(remove=[(3, 4, 5)]), M, perfect=True)
    assert not v and v.clause == "non-edge"
    v = verify_matching(K, Matching(((0, 1, 2), (2, 3, 4))))
    assert not v and v.clause == "overlap"
    v = verify_matching(K, Matching(((0, 1, 2),)), perfect=True)
    assert not v and v.clause == "incomplete"
    assert verify_matching(K, Matching(((0, 1, 2),)))


def test_extremal_rejects_every_three_disjoint_triples():
    H, _, _ = extremal_construction(9)
    for a in combinations(range(9), 3):
        rest = [v for v in range(9) if v not in a]
        for b in combinations(rest, 3):
            c = tuple(v for v in rest if v not in b)
            assert not verify_matching(H, Matching((a, b, c)), perfect=True)


def test_immutable_updates():
    H = random_3graph(9, 0.5, 2)
    G = H.with_edges(add=[(0, 1, 2)], remove=[(3, 4, 5)])
    assert H == random_3graph(9, 0.5, 2)
    assert G.has_edge(0, 1, 2) and not G.has_edge(3, 4, 5)
    assert H.toggled([0]).toggled([0]) == H


def test_induced_relabels():
    H = random_3graph(12, 0.5, 4)
    U = [1, 3, 4, 8, 10, 11]
    G, labels = H.induced(U)
    assert labels == tuple(U)
    lifted = {tuple(labels[v] for v in e) for e in G.edges()}
    assert lifted == {e for e in H.edges() if set(e) <= set(U)}
