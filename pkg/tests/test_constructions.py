from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from hypermatch.constructions import (
    GeneratorSpec,
    extremal_construction,
    extremal_plus,
    extremal_plus_parts,
    perturbed_extremal,
    random_3graph,
    random_min_degree,
)
from hypermatch.core import Hypergraph3, min_degree, subset_density
from hypermatch.errors import InvalidOrder
from hypermatch.exact import has_perfect_matching, max_matching_dp
from hypermatch.threshold import threshold


def test_extremal_n9():
    H, A, B = extremal_construction(9)
    assert (len(A), len(B)) == (2, 7)
    assert min_degree(H) == 13
    assert max_matching_dp(H).size == 2
    assert H.m == comb(9, 3) - comb(7, 3) == 49
    assert all(set(e) & A for e in H.edges())


def test_extremal_n6():
    H, A, B = extremal_construction(6)
    assert (len(A), len(B), H.m) == (1, 5, 10)
    assert min_degree(H) == 4
    assert max_matching_dp(H).size == 1


@pytest.mark.parametrize("n", range(6, 61, 3))
def test_extremal_min_degree_closed_form(n):
    H, _, _ = extremal_construction(n)
    assert min_degree(H) == comb(n - 1, 2) - comb(2 * n // 3, 2) == threshold(n) - 1


@pytest.mark.parametrize("n", [5, 7, 3, 0])
def test_bad_orders(n):
    with pytest.raises(InvalidOrder):
        extremal_construction(n)
    with pytest.raises(InvalidOrder):
        extremal_plus(n)


def test_extremal_plus():
    H = extremal_plus(9)
    assert min_degree(H) == 28 - comb(5, 2) == 18 >= threshold(9)
    assert has_perfect_matching(extremal_plus(6))
    A, B = extremal_plus_parts(30)
    assert len(A) == 10 and subset_density(extremal_plus(30), B) == 0
    for n in range(6, 61, 3):
        assert min_degree(extremal_plus(n)) >= threshold(n)


def test_random_3graph_extremes_and_determinism():
    assert random_3graph(9, 1.0, 0) == Hypergraph3.complete(9)
    assert random_3graph(9, 0.0, 0).m == 0
    assert random_3graph(12, 0.5, 7) == random_3graph(12, 0.5, 7)
    assert random_3graph(12, 0.5, 7) != random_3graph(12, 0.5, 8)
    with pytest.raises(ValueError):
        random_3graph(9, 1.5, 0)


def test_random_min_degree_examples():
    assert min_degree(random_min_degree(9, 14, 3)) >= 14
    assert random_min_degree(9, comb(8, 2), 1) == Hypergraph3.complete(9)
    assert random_min_degree(12, 28, 5) == random_min_degree(12, 28, 5)


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 15), st.data())
def test_random_min_degree_floor(n, data):
    tau = data.draw(st.integers(0, comb(n - 1, 2)))
    H = random_min_degree(n, tau, data.draw(st.integers(0, 2**32)))
    assert min_degree(H) >= tau


def test_perturbed_extremal():
    assert perturbed_extremal(12, 0, 4) == extremal_plus(12)
    base = extremal_plus(9)
    full = perturbed_extremal(9, comb(9, 3), 0)
    assert full.m == comb(9, 3) - base.m
    H = perturbed_extremal(30, 50, 1)
    assert bin(H.bits ^ extremal_plus(30).bits).count("1") == 50
    _, B = extremal_plus_parts(30)
    d = subset_density(H, B)
    assert d <= Fraction(50, comb(20, 3)) and d < 6 * Fraction(5, 100)


def test_generator_spec_dispatch():
    assert GeneratorSpec("extremal", 9).build() == extremal_construction(9)[0]
    assert GeneratorSpec("random", 9, p=0.3, seed=2).build() == random_3graph(9, 0.3, 2)
    assert GeneratorSpec("perturbed-extremal", 9, flips=3, seed=1).build() == perturbed_extremal(9, 3, 1)
    with pytest.raises(ValueError):
        GeneratorSpec("nope", 9)
