"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (shown even when pytest
captures output) and then asserts the same condition.
"""

import time
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from hypermatch.constructions import (
    extremal_construction,
    extremal_plus,
    extremal_plus_parts,
    perturbed_extremal,
    random_3graph,
)
from hypermatch.core import degree_accounting, min_degree, subset_density, verify_matching
from hypermatch.cover import engine
from hypermatch.cover.absorb import absorption_rate, build_absorbing_matching
from hypermatch.cover.engine import Grown, almost_perfect_matching
from hypermatch.cover.links import LinkGraph, OTHER_KIND, SPARSE_KIND, classify_link
from hypermatch.cover.structures import EngineParams, Extremal
from hypermatch.exact import NO_PM, has_perfect_matching, max_matching_branch, max_matching_dp
from hypermatch.extremal import extremal_perfect_matching
from hypermatch.pipeline import PipelineConfig, PipelineSuccess, perfect_matching
from hypermatch.threshold import sampled_verify

from cases import cover_violations, dense_bipartite, random_graph
from oracles import brute_degrees, brute_inside
from test_lemmas import check_graph_matching, check_min_degree_subgraph, check_pigeonhole


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail

    return emit


def test_criterion_01_extremal_sharpness(verdict):
    start = time.perf_counter()
    rows = []
    for n in (6, 9, 12, 15):
        H, _, _ = extremal_construction(n)
        rows.append((n, min_degree(H), comb(n - 1, 2) - comb(2 * n // 3, 2), max_matching_dp(H).size, n // 3 - 1))
    secs = time.perf_counter() - start
    ok = all(d == f and m == k for _, d, f, m, k in rows) and secs < 10
    verdict(1, ok, f"min degree / max matching {[(n, d, m) for n, d, _, m, _ in rows]} in {secs:.1f}s")


def test_criterion_02_trichotomy(verdict):
    start = time.perf_counter()
    kinds = [classify_link(LinkGraph(bits)).kind for bits in range(512) if bin(bits).count("1") >= 5]
    secs = time.perf_counter() - start
    other = kinds.count(OTHER_KIND) + kinds.count(SPARSE_KIND)
    ok = len(kinds) == 256 and other == 0 and secs < 1
    verdict(2, ok, f"{len(kinds) - other}/{len(kinds)} classified, {other} other, {secs:.2f}s")


def test_criterion_03_exhaustive_n6(verdict, n6_report):
    r = n6_report
    H, _, _ = extremal_construction(6)
    witness = min_degree(H) == 4 and has_perfect_matching(H).status == NO_PM
    ok = r.examined == 1 << 20 and r.exact_m1 >= 5 and witness and r.runtime_ms < 600_000
    verdict(
        3,
        ok,
        f"m1(3,6) = {r.exact_m1} (formula {r.formula}, equal: {r.matches_formula}), "
        f"{r.examined} graphs in {r.runtime_ms / 1000:.1f}s",
    )


def test_criterion_04_solver_agreement(verdict):
    start = time.perf_counter()
    bad = 0
    for i in range(10_000):
        n = (6, 9, 12)[i % 3]
        p = ((i // 3) % 9 + 1) / 10
        H = random_3graph(n, p, i)
        dp = max_matching_dp(H)
        br = max_matching_branch(H, budget=10**6)
        if dp.size != br.size or not br.exact or not verify_matching(H, br.witness) or not verify_matching(H, dp.witness):
            bad += 1
    secs = time.perf_counter() - start
    verdict(4, bad == 0 and secs < 300, f"{10_000 - bad}/10000 instances agree in {secs:.1f}s")


def test_criterion_05_sampled_threshold(verdict, tmp_path):
    start = time.perf_counter()
    reports = [sampled_verify(n, tau, 1000, seed=0, persist_dir=tmp_path) for n, tau in ((9, 14), (12, 28))]
    secs = time.perf_counter() - start
    persisted = len(list(tmp_path.glob("*.hm3")))
    ok = (
        all(r.undecided == 0 and r.pm_count + len(r.counterexamples) == 1000 for r in reports)
        and sum(len(r.counterexamples) for r in reports) == 0
        and persisted == 0
        and secs < 300
    )
    detail = ", ".join(f"(n={r.n}, tau={r.tau}): {r.pm_count} PM, {len(r.counterexamples)} counterexamples" for r in reports)
    verdict(5, ok, f"{detail} in {secs:.1f}s")


def test_criterion_06_pipeline_random(verdict):
    start = time.perf_counter()
    wins = 0
    for seed in range(20):
        H = random_3graph(60, 0.8, seed)
        res = perfect_matching(H, PipelineConfig(seed=seed, fallback_exact=False))
        if isinstance(res, PipelineSuccess) and res.route != "exact" and verify_matching(H, res.matching, perfect=True):
            wins += 1
    secs = time.perf_counter() - start
    verdict(6, wins >= 19 and secs < 600, f"{wins}/20 verified PMs without fallback in {secs:.1f}s")


def test_criterion_07_extremal_branch(verdict):
    start = time.perf_counter()
    results = []
    for n in (30, 60, 90):
        H = extremal_plus(n)
        B = extremal_plus_parts(n)[1]
        M1 = extremal_perfect_matching(H, B, seed=1)
        M2 = extremal_perfect_matching(H, B, seed=1)
        results.append(bool(verify_matching(H, M1, perfect=True)) and M1 == M2)
    secs = time.perf_counter() - start
    verdict(7, all(results) and secs < 120, f"verified and deterministic for n = 30, 60, 90: {results} in {secs:.1f}s")


def test_criterion_08_absorbing(verdict):
    start = time.perf_counter()
    H = random_3graph(60, 0.8, 9)
    AM = build_absorbing_matching(H, cap=3, seed=0)
    ok_count, trials = absorption_rate(H, AM, 100, seed=1)
    secs = time.perf_counter() - start
    ok = len(AM.M) == 3 and ok_count >= 95 and secs < 60
    verdict(8, ok, f"{ok_count}/{trials} sets absorbed by {len(AM.M)} edges in {secs:.1f}s")


def test_criterion_09_lemma_suite(verdict):
    start = time.perf_counter()
    for seed in range(200):
        check_pigeonhole(*dense_bipartite(seed))
    for seed in range(200):
        G = random_graph(seed)
        check_min_degree_subgraph(G)
        check_graph_matching(G)
    rng = np.random.default_rng(2024)
    for i in range(1000):
        n = int(rng.integers(3, 16))
        H = random_3graph(n, float(rng.uniform(0, 1)), i)
        S = {v for v in range(n) if rng.random() < 0.5}
        e1, e2, e3 = degree_accounting(H, S)
        assert sum(brute_degrees(n, H.edges())[v] for v in S) == e1 + 2 * e2 + 3 * e3
    secs = time.perf_counter() - start
    verdict(9, secs < 120, f"200 pigeonhole, 200 graph-lemma, 1000 accounting checks in {secs:.1f}s")


def test_criterion_10_cover_moves(verdict, monkeypatch):
    start = time.perf_counter()
    accepted, violations = [], []

    def wrap(name, move):
        def run(cover, H, params):
            res = move(cover, H, params)
            if isinstance(res, Grown):
                accepted.append(name)
                problems = cover_violations(H, res.cover)
                if problems or res.cover.size <= cover.size:
                    violations.append((name, problems))
            return res

        return name, run

    monkeypatch.setattr(engine, "MOVES", tuple(wrap(n, m) for n, m in engine.MOVES))
    for seed in range(50):
        H = perturbed_extremal(60, 40, seed)
        almost_perfect_matching(H, EngineParams(t=2, seed=seed))
    H, _, _ = extremal_construction(60)
    params = EngineParams()
    out = almost_perfect_matching(H, params)
    certified = (
        isinstance(out, Extremal)
        and len(out.B) >= (Fraction(2, 3) - Fraction(params.alpha)) * H.n
        and Fraction(brute_inside(H.edges(), out.B), comb(len(out.B), 3)) < Fraction(params.alpha)
        and subset_density(H, out.B) == out.density
    )
    secs = time.perf_counter() - start
    ok = accepted and not violations and certified and secs < 300
    counts = {k: accepted.count(k) for k in sorted(set(accepted))}
    verdict(
        10,
        bool(ok),
        f"{len(accepted)} accepted moves {counts}, {len(violations)} violations; "
        f"extremal(60) -> {type(out).__name__} |B|={len(getattr(out, 'B', ()))}; {secs:.1f}s",
    )
