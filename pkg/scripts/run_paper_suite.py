"""Run the acceptance criteria and print one line per criterion.

    python3 scripts/run_paper_suite.py [--criteria 1,4,8] [--order-seed 7]
"""

import argparse
import sys

from nilamalg.suite import SuiteConfig, run_suite


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--criteria", help="comma-separated criterion numbers")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--order-seed", type=int, help="shuffle the run order")
    ap.add_argument("--verbose", action="store_true", help="print details of each criterion")
    args = ap.parse_args(argv)
    nums = [int(x) for x in args.criteria.split(",")] if args.criteria else None
    results = run_suite(nums, SuiteConfig(seed=args.seed), args.order_seed)
    for r in results:
        print(r.line())
        if args.verbose or not r.passed:
            print(f"    {r.detail}")
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
