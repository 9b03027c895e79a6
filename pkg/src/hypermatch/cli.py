"""Command-line interface.

Exit codes: 0 success / PM found, 1 verified no PM / rejected, 2 undecided or
stage failure, 64 usage error, 65 data error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .constructions import KINDS, GeneratorSpec
from .core import verify_matching
from .cover.links import trichotomy_census
from .errors import HypermatchError, ParseError
from .exact import NO_PM, PM, has_perfect_matching, max_matching_branch, max_matching_dp, DP_LIMIT
from .io import parse_hypergraph, parse_matching, write_hypergraph, write_matching

EXIT_OK, EXIT_NO, EXIT_UNDECIDED, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv(path, fields, rows) -> None:
    out = sys.stdout if path in (None, "-") else open(path, "w", newline="")
    try:
        w = csv.DictWriter(out, fieldnames=fields, extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.kind, args.n, p=args.p, tau=args.tau, flips=args.flips, seed=args.seed)
    _write(args.output, write_hypergraph(spec.build()))
    return EXIT_OK


def cmd_solve(args) -> int:
    H = parse_hypergraph(_read(args.file))
    verdict = has_perfect_matching(H, budget=args.budget)
    if verdict.status == PM:
        print(f"PM: perfect matching with {H.n // 3} edges")
        if args.witness:
            _write(args.witness, write_matching(verdict.witness, perfect=True))
        return EXIT_OK
    if verdict.status == NO_PM:
        print(f"no PM: maximum matching {verdict.max_size}")
        if args.witness:
            res = max_matching_dp(H) if H.n <= DP_LIMIT else max_matching_branch(H, budget=args.budget)
            _write(args.witness, write_matching(res.witness, perfect=False))
        return EXIT_NO
    print(f"undecided: {verdict.note}")
    return EXIT_UNDECIDED


def cmd_verify(args) -> int:
    H = parse_hypergraph(_read(args.file))
    M, perfect = parse_matching(_read(args.matching))
    verdict = verify_matching(H, M, perfect=perfect)
    if verdict:
        print("accepted")
        return EXIT_OK
    print(f"rejected ({verdict.clause}): {verdict.detail}")
    return EXIT_NO


def cmd_threshold(args) -> int:
    from .threshold import threshold

    print(threshold(args.n))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    from .threshold import exhaustive_verify_n6

    rep = exhaustive_verify_n6(workers=args.workers)
    print(f"graphs examined: {rep.examined}, with PM: {rep.pm_count}")
    print("min_degree,graphs,with_pm")
    for d, (c, p) in sorted(rep.by_min_degree.items()):
        print(f"{d},{c},{p}")
    print(f"largest min degree without PM: {rep.verified_floor}")
    print(f"m1(3,6) = {rep.exact_m1} (formula gives {rep.formula})")
    return EXIT_OK


def cmd_sample(args) -> int:
    from .threshold import CSV_FIELDS, sampled_verify

    persist = Path(args.persist) if args.persist else None
    rep = sampled_verify(args.n, args.tau, args.count, args.seed, workers=args.workers, persist_dir=persist)
    _csv(None, CSV_FIELDS, [rep.csv_row()])
    if rep.counterexamples:
        return EXIT_NO
    return EXIT_UNDECIDED if rep.undecided else EXIT_OK


def cmd_pipeline(args) -> int:
    from .cover.engine import TRACE_FIELDS as COVER_FIELDS
    from .extremal import TRACE_FIELDS as EXT_FIELDS
    from .pipeline import PipelineConfig, PipelineSuccess, perfect_matching

    H = parse_hypergraph(_read(args.file))
    cfg = PipelineConfig(alpha=args.alpha, seed=args.seed, fallback_exact=args.fallback)
    res = perfect_matching(H, cfg)
    if args.trace:
        base = Path(args.trace)
        _csv(base, COVER_FIELDS, res.trace.get("cover", []))
        if "extremal" in res.trace:
            _csv(base.with_name(base.stem + "_extremal" + base.suffix), EXT_FIELDS, res.trace["extremal"])
    if isinstance(res, PipelineSuccess):
        print(f"PM via {res.route} route")
        if args.witness:
            _write(args.witness, write_matching(res.matching, perfect=True))
        return EXIT_OK
    print(f"failed at stage {res.stage}: {res.message}")
    if res.exact_status is not None:
        print(f"exact solver: {res.exact_status}")
    return EXIT_NO if res.exact_status == NO_PM else EXIT_UNDECIDED


def cmd_linkfact(args) -> int:
    c = trichotomy_census()
    print(f"{c['total'] - c['other']}/{c['total']} classified, {c['other']} other")
    return EXIT_OK if c["other"] == 0 else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypermatch", description="Perfect matchings in 3-uniform hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--tau", type=int, default=0)
    g.add_argument("--flips", type=int, default=0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="decide whether a perfect matching exists")
    s.add_argument("file")
    s.add_argument("--witness")
    s.add_argument("--budget", type=int, default=2_000_000)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a matching file against a hypergraph")
    v.add_argument("file")
    v.add_argument("matching")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("threshold", help="print the degree threshold for n")
    t.add_argument("--n", type=int, required=True)
    t.set_defaults(func=cmd_threshold)

    e = sub.add_parser("enumerate-n6", help="decide all 2^20 hypergraphs on six vertices")
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=cmd_enumerate)

    sa = sub.add_parser("sample", help="check degree-conditioned random instances")
    sa.add_argument("--n", type=int, required=True)
    sa.add_argument("--tau", type=int, required=True)
    sa.add_argument("--count", type=int, required=True)
    sa.add_argument("--seed", type=int, default=0)
    sa.add_argument("--workers", type=int, default=1)
    sa.add_argument("--persist")
    sa.set_defaults(func=cmd_sample)

    pl = sub.add_parser("pipeline", help="run the full perfect-matching driver")
    pl.add_argument("file")
    pl.add_argument("--alpha", type=float, default=0.3)
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--fallback", action=argparse.BooleanOptionalAction, default=None)
    pl.add_argument("--trace")
    pl.add_argument("--witness")
    pl.set_defaults(func=cmd_pipeline)

    lf = sub.add_parser("linkfact", help="check the 3x3 link-graph trichotomy")
    lf.set_defaults(func=cmd_linkfact)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (HypermatchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
