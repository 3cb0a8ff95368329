"""Run seeded extraction batches for the three K_n^3 theorems and report digests.

    python3 scripts/verify_theorems.py --trials 2000 --seed 1
"""
import argparse
import sys

from hypermatch.pipelines import GENERATORS, verify_batch


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    failed = 0
    for which in (1, 2, 3):
        gens = GENERATORS if which == 1 else [g for g in GENERATORS if g != "planted-disk"]
        for gen in gens:
            res = verify_batch(which, args.trials, args.seed, gen)
            print(res.summary() + f"elapsed {res.seconds:.2f}s\n")
            failed += len(res.failures)
            for line in res.failures[:5]:
                print("  ", line)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
