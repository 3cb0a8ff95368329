"""Command line entry point: ``hypermatch <subcommand> ...``.

Exit codes: 0 success (search: FOUND), 1 verification failure, 2 usage or
input error, 10 search EXHAUSTED, 20 search BUDGET, 30 extraction failure
(counterexample certificate written).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .combinatorics import Coloring, InputError, ParseError, deserialize, serialize
from .matching import BoundParams, afl_bound, check_matching, conjecture_bound
from .pipelines import (
    GENERATORS,
    THEOREMS,
    ExtractionFailure,
    check_trace,
    extract,
    extraction_certificate,
    generate_coloring,
    verify_batch,
)
from .search import BudgetExceeded, Exhausted, SearchProblem, certify, search_avoiding
from .structures import analyze, format_report

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_EXHAUSTED = 10
EXIT_BUDGET = 20
EXIT_COUNTEREXAMPLE = 30

# (t, s, k, r) -> theorem number
KNOWN_INSTANCES = {(3, 2, 4, 3): 1, (3, 2, 5, 3): 2, (3, 2, 6, 3): 3}


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _read_coloring(path: str) -> Coloring:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return deserialize(text)


def cmd_bounds(args) -> int:
    p = BoundParams(args.t, args.s, args.k, args.r)
    lines = [
        f"params t={p.t} s={p.s} k={p.k} r={p.r}",
        f"afl_bound: {afl_bound(p)}  (monochromatic {p.k}-matching in any {p.t}-coloring)",
        f"conjecture_bound: {conjecture_bound(p)}  ({p.s}-colored {p.k}-matching in any {p.t}-coloring)",
    ]
    which = KNOWN_INSTANCES.get((p.t, p.s, p.k, p.r))
    if which is not None:
        n = THEOREMS[which][0]
        lines.append(
            f"theorem {which}: proven for K_{n}^3; witnesses via 'extract --which {which}'"
        )
    if p.s == p.t:
        lines.append("note: s = t, the bound is just kr")
    print("\n".join(lines))
    return 0


def cmd_extract(args) -> int:
    coloring = _read_coloring(args.input)
    n = THEOREMS[args.which][0]
    if (coloring.n, coloring.r, coloring.t) != (n, 3, 3):
        raise UsageError(
            f"--which {args.which} needs a 3-coloring of K_{n}^3, got "
            f"n={coloring.n} r={coloring.r} t={coloring.t}"
        )
    try:
        matching, trace = extract(coloring, args.which)
        check_matching(coloring, matching, size=THEOREMS[args.which][1], max_colors=2)
        if trace is not None:
            check_trace(coloring, trace, args.which)
    except ExtractionFailure as exc:
        _emit(exc.certificate, args.out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    _emit(extraction_certificate(args.which, matching, trace), args.out)
    return 0


def cmd_search(args) -> int:
    p = SearchProblem(
        args.n, args.r, args.t, args.s, args.k,
        max_nodes=args.max_nodes,
        max_seconds=args.max_seconds,
        vertex_symmetry=args.vertex_symmetry,
        symmetry_depth=args.symmetry_depth,
        workers=args.workers,
    )
    outcome = search_avoiding(p)
    _emit(certify(outcome, p), args.out)
    if isinstance(outcome, Exhausted):
        return EXIT_EXHAUSTED
    if isinstance(outcome, BudgetExceeded):
        return EXIT_BUDGET
    return 0


def cmd_analyze(args) -> int:
    coloring = _read_coloring(args.input)
    if coloring.r != 3 or coloring.n < 6:
        raise UsageError("analyze needs a coloring of K_n^3 with n >= 6")
    report = analyze(coloring)
    header = f"coloring n={coloring.n} r={coloring.r} t={coloring.t}\n"
    _emit(header + format_report(report, machine=args.machine), args.out)
    return 0


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    if args.generator.startswith("planted-disk") and args.which != 1:
        raise UsageError("planted-disk colorings exist only for --which 1")
    res = verify_batch(args.which, args.trials, args.seed, args.generator)
    sys.stdout.write(res.summary())
    for line in res.failures:
        print(line)
    print(f"elapsed {res.seconds:.2f}s", file=sys.stderr)
    return EXIT_FAIL if res.failures else 0


def cmd_generate(args) -> int:
    coloring = generate_coloring(args.generator, args.n, args.r, args.t, args.seed)
    _emit(serialize(coloring), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypermatch",
        description="s-colored matchings in edge-colored complete r-uniform hypergraphs "
        "(vertices are 0-indexed)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="closed-form vertex bounds")
    for name in ("t", "s", "k", "r"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("extract", help="extract a 2-colored matching with its certificate")
    p.add_argument("input", help="coloring file, or - for stdin")
    p.add_argument("--which", type=int, choices=sorted(THEOREMS), required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("search", help="exhaustive search for an avoiding coloring")
    for name in ("n", "r", "t", "s", "k"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--max-nodes", type=int, default=10**9)
    p.add_argument("--max-seconds", type=float, default=600.0)
    p.add_argument("--vertex-symmetry", action="store_true", help="lex-leader pruning under vertex permutations")
    p.add_argument("--symmetry-depth", type=int, default=8)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("analyze", help="structure report for a 3-uniform coloring")
    p.add_argument("input")
    p.add_argument("--machine", action="store_true", help="append a machine-readable block")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="batch extraction on generated colorings")
    p.add_argument("--which", type=int, choices=sorted(THEOREMS), required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--generator", default="uniform", help=f"one of {', '.join(GENERATORS)}[:arg]")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a generated coloring")
    for name in ("n", "r", "t"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--generator", default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InputError, ParseError, OSError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
