"""Exhaustive avoidance search over a table of small (n, r, t, s, k) instances.

Prints outcome, node counts with and without vertex symmetry breaking, and
the time taken, which is a quick way to see where the search stops being cheap.
"""
import argparse
import time

from hypermatch.matching import BoundParams, conjecture_bound
from hypermatch.search import SearchProblem, search_avoiding

INSTANCES = [
    (4, 2, 2, 1, 2),
    (5, 2, 2, 1, 2),
    (7, 2, 2, 1, 3),
    (8, 2, 2, 1, 3),
    (6, 3, 2, 1, 2),
    (7, 3, 2, 1, 2),
    (6, 2, 3, 2, 3),
    (9, 2, 2, 1, 4),
    (10, 3, 2, 1, 3),
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-seconds", type=float, default=60.0)
    ap.add_argument("--symmetry-depth", type=int, default=8)
    args = ap.parse_args()
    print(f"{'instance':<18}{'bound':>6}{'outcome':>11}{'nodes':>10}{'nodes(v)':>10}{'secs':>8}")
    for inst in INSTANCES:
        n, r, t, s, k = inst
        bound = conjecture_bound(BoundParams(t, s, k, r))
        start = time.perf_counter()
        plain = search_avoiding(SearchProblem(*inst, max_seconds=args.max_seconds))
        reduced = search_avoiding(SearchProblem(
            *inst, max_seconds=args.max_seconds, vertex_symmetry=True, symmetry_depth=args.symmetry_depth))
        secs = time.perf_counter() - start
        print(f"{str(inst):<18}{bound:>6}{plain.outcome:>11}{plain.nodes:>10}{reduced.nodes:>10}{secs:>8.2f}")


if __name__ == "__main__":
    main()
