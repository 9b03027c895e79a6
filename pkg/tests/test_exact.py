import pytest
from hypothesis import given, settings, strategies as st

from hypermatch.constructions import extremal_construction, extremal_plus, random_3graph
from hypermatch.core import Hypergraph3, verify_matching
from hypermatch.errors import InvalidOrder, OrderTooLarge
from hypermatch.exact import NO_PM, PM, UNDECIDED, has_perfect_matching, max_matching_branch, max_matching_dp

from oracles import brute_max_matching


def test_dp_examples():
    assert max_matching_dp(Hypergraph3.complete(6)).size == 2
    assert max_matching_dp(extremal_construction(9)[0]).size == 2
    r = max_matching_dp(Hypergraph3.from_edges(3, [(0, 1, 2)]))
    assert r.size == 1 and verify_matching(Hypergraph3.complete(3), r.witness, perfect=True)


def test_dp_order_limit():
    with pytest.raises(OrderTooLarge):
        max_matching_dp(Hypergraph3.empty(25))


def test_branch_examples():
    r = max_matching_branch(Hypergraph3.complete(30))
    assert (r.size, r.exact) == (10, True)
    r = max_matching_branch(extremal_construction(30)[0])
    assert (r.size, r.exact) == (9, True)


def test_branch_budget_exhaustion_is_flagged():
    r = max_matching_branch(random_3graph(24, 0.05, 3), budget=5)
    assert not r.exact
    assert verify_matching(random_3graph(24, 0.05, 3), r.witness)


def test_has_perfect_matching_examples():
    v = has_perfect_matching(extremal_plus(9))
    assert v.status == PM and verify_matching(extremal_plus(9), v.witness, perfect=True)
    assert has_perfect_matching(extremal_construction(9)[0]).status == NO_PM
    assert has_perfect_matching(Hypergraph3.empty(6)).status == NO_PM
    with pytest.raises(InvalidOrder):
        has_perfect_matching(Hypergraph3.complete(7))


def test_undecided_is_not_no():
    H = extremal_construction(45)[0].with_edges(remove=[(0, 1, 2)])
    v = has_perfect_matching(H, budget=1)
    assert v.status in (UNDECIDED, NO_PM)
    if v.status == UNDECIDED:
        assert not v.decided


@settings(max_examples=300, deadline=None)
@given(st.integers(3, 10), st.sampled_from([0.05, 0.1, 0.2, 0.4, 0.7]), st.integers(0, 2**32))
def test_solvers_match_brute_force(n, p, seed):
    H = random_3graph(n, p, seed)
    want = brute_max_matching(H.edges())
    dp, br = max_matching_dp(H), max_matching_branch(H, budget=10**6)
    assert dp.size == want and br.size == want and br.exact
    assert verify_matching(H, dp.witness) and verify_matching(H, br.witness)
    assert len(dp.witness) == want and len(br.witness) == want


def test_monotone_under_edge_addition():
    import numpy as np

    rng = np.random.default_rng(11)
    for i in range(1000):
        n = int(rng.choice([6, 9, 12]))
        H = random_3graph(n, float(rng.uniform(0.02, 0.3)), i)
        missing = [r for r in range(len(H.present)) if not H.present[r]]
        if not missing:
            continue
        G = H.toggled([int(rng.choice(missing))])
        assert max_matching_dp(G).size >= max_matching_dp(H).size
