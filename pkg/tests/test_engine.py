from fractions import Fraction
from itertools import product

import pytest

from hypermatch.constructions import extremal_construction, perturbed_extremal, random_3graph
from hypermatch.core import Hypergraph3, subset_density, verify_matching
from hypermatch.cover import engine
from hypermatch.cover.engine import (
    TRACE_FIELDS,
    Grown,
    almost_perfect_matching,
    improve_by_links,
    improve_or_report_extremal,
    improve_two_sided,
)
from hypermatch.cover.links import B320, B320_KIND, classify_link, k_sidedness, link_graph_of_pair
from hypermatch.cover.structures import (
    AlmostPerfect,
    EngineParams,
    Extremal,
    NotApplicable,
    Stalled,
    Tripartite,
    TripartiteCover,
)

from cases import cover_violations

P = EngineParams()


def extremal_cover(n=30):
    """Cover of the extremal graph by edges {a, b, b'}, one per A-vertex,
    so that the leftover lies inside B."""
    H, A, B = extremal_construction(n)
    Bs = sorted(B)
    members = tuple(Tripartite(((a,), (Bs[2 * k],), (Bs[2 * k + 1],))) for k, a in enumerate(sorted(A)))
    return H, TripartiteCover(n, 1, members), A, B


def member(start, t):
    return Tripartite(tuple(tuple(range(start + k * t, start + (k + 1) * t)) for k in range(3)))


def assert_grew(H, old, res):
    assert isinstance(res, Grown)
    assert not cover_violations(H, res.cover)
    assert res.gain == res.cover.size - old.size >= 1


def test_params_validation():
    with pytest.raises(ValueError):
        EngineParams(eta=0.05, alpha=0.05)
    with pytest.raises(ValueError):
        EngineParams(t=0)
    assert EngineParams().pair_fraction == 0.05


# -- two-sided members ---------------------------------------------------------


def test_two_sided_not_applicable_on_extremal():
    H, C, A, B = extremal_cover()
    assert C.leftover <= B
    C.check(H)
    for T in C.members:
        assert k_sidedness(T, C.leftover, H, P.eta) == 1
    assert improve_two_sided(C, H, P) is NotApplicable


def test_two_sided_fires_on_complete():
    K = Hypergraph3.complete(30)
    C = TripartiteCover(30, 2, (member(0, 2),))
    res = improve_two_sided(C, K, EngineParams(t=2))
    assert_grew(K, C, res)


def test_two_sided_empty_leftover():
    K = Hypergraph3.complete(9)
    C = TripartiteCover(9, 1, tuple(member(3 * k, 1) for k in range(3)))
    assert improve_two_sided(C, K, P) is NotApplicable


# -- links ------------------------------------------------------------------------


def test_links_not_applicable_without_links():
    H = Hypergraph3.from_edges(15, [(0, 1, 2), (3, 4, 5)])
    C = TripartiteCover(15, 1, (member(0, 1), member(3, 1)))
    assert improve_by_links(C, H, P) is NotApplicable


def test_links_case_pm_on_complete():
    K = Hypergraph3.complete(24)
    C = TripartiteCover(24, 1, (member(0, 1), member(3, 1)))
    assert_grew(K, C, improve_by_links(C, K, P))


def planted_b320(t=3, leftover=12):
    Ti, Tj = member(0, t), member(3 * t, t)
    I = list(range(6 * t, 6 * t + leftover))
    edges = set()
    for T in (Ti, Tj):
        edges |= {tuple(sorted(e)) for e in product(*T.classes)}
    for p, q in B320.edges:
        edges |= {tuple(sorted(e)) for e in product(Ti.classes[p], Tj.classes[q], I)}
    n = 6 * t + leftover
    return Hypergraph3.from_edges(n, edges), TripartiteCover(n, t, (Ti, Tj))


def test_links_case_b320():
    H, C = planted_b320()
    Ti, Tj = C.members
    L = link_graph_of_pair(Ti, Tj, C.leftover, H, P.eta)
    assert L == B320 and classify_link(L).kind == B320_KIND
    res = improve_by_links(C, H, P)
    assert_grew(H, C, res)
    # the third left class is returned to the leftover, keeping sizes uniform
    assert set(Ti.classes[2]) <= res.cover.leftover
    assert {len(c) for T in res.cover.members for c in T.classes} == {res.cover.t}


# -- (3,1,1) links ----------------------------------------------------------------


def test_extremal_certificate_from_cover():
    H, C, A, B = extremal_cover()
    res = improve_or_report_extremal(C, H, P)
    assert isinstance(res, Extremal)
    assert res.B <= B and subset_density(H, res.B) == res.density == 0
    assert len(res.B) >= (Fraction(2, 3) - Fraction(P.alpha)) * H.n


def test_complete_never_extremal():
    K = Hypergraph3.complete(30)
    C = TripartiteCover(30, 1, tuple(member(3 * k, 1) for k in range(4)))
    assert not isinstance(improve_or_report_extremal(C, K, P), Extremal)


def test_dense_weak_classes_grow():
    # members {a, b, b'}; edges meet A or lie inside the weak classes
    k, extra = 4, 12
    n = 3 * k + extra
    A = set(range(k))
    members = tuple(Tripartite(((a,), (k + 2 * a,), (k + 2 * a + 1,))) for a in range(k))
    weak = set(range(k, 3 * k))
    edges = [e for e in Hypergraph3.complete(n).edges() if set(e) & A or set(e) <= weak]
    H = Hypergraph3.from_edges(n, edges)
    C = TripartiteCover(n, 1, members)
    res = improve_or_report_extremal(C, H, P)
    assert_grew(H, C, res)
    # without the dense weak classes the same cover certifies a sparse set
    H0 = Hypergraph3.from_edges(n, [e for e in edges if set(e) & A])
    assert isinstance(improve_or_report_extremal(C, H0, P), Extremal)


# -- driver -----------------------------------------------------------------------


def test_complete_almost_perfect():
    K = Hypergraph3.complete(30)
    out = almost_perfect_matching(K)
    assert isinstance(out, AlmostPerfect) and not out.uncovered
    assert verify_matching(K, out.matching, perfect=True)


def test_extremal_60_certificate():
    H, A, B = extremal_construction(60)
    out = almost_perfect_matching(H, EngineParams(eta=0.01, alpha=0.05))
    assert isinstance(out, Extremal)
    assert subset_density(H, out.B) < Fraction(5, 100)
    assert len(out.B) >= (Fraction(2, 3) - Fraction(5, 100)) * 60


def test_random_dense_outcome_verified():
    H = random_3graph(60, 0.8, 1)
    rows = []
    out = almost_perfect_matching(H, trace=rows)
    assert isinstance(out, AlmostPerfect)
    assert verify_matching(H, out.matching)
    assert len(out.uncovered) < 0.05**2 * 60
    assert rows and all(tuple(r) == TRACE_FIELDS for r in rows)


def test_stalled_is_reported():
    # a sparse host where nothing dense exists: the loop must stall, not lie
    H = Hypergraph3.from_edges(30, [(0, 1, 2)])
    out = almost_perfect_matching(H)
    assert isinstance(out, Stalled)
    assert out.history and verify_matching(H, out.matching)
    assert out.densities["leftover"] == 27


@pytest.mark.parametrize("seed", range(8))
def test_moves_keep_invariants(seed, monkeypatch):
    H = perturbed_extremal(60, 40, seed)
    log = []

    def wrap(name, move):
        def run(cover, host, params):
            assert not cover_violations(host, cover)
            res = move(cover, host, params)
            if isinstance(res, Grown):
                log.append(name)
                assert not cover_violations(host, res.cover)
                assert res.cover.size > cover.size
            return res

        return name, run

    monkeypatch.setattr(engine, "MOVES", tuple(wrap(n, m) for n, m in engine.MOVES))
    out = almost_perfect_matching(H, EngineParams(t=2))
    assert isinstance(out, (AlmostPerfect, Extremal, Stalled))
    if isinstance(out, AlmostPerfect):
        assert verify_matching(H, out.matching)
    assert log
