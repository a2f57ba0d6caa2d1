"""Run every differential suite and print a summary table."""

import argparse
import json
import sys

from ultrext.suites import SUITES, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="one JSON report per line")
    args = ap.parse_args()
    bad = 0
    for name in sorted(SUITES):
        rep = run_suite(name, args.trials, seed=args.seed)
        bad += not rep.ok
        if args.json:
            print(json.dumps(rep.to_dict(), sort_keys=True))
        else:
            state = "ok" if rep.ok else "FAIL"
            print(f"{name:24} {state:4}  resolved={rep.resolved:<5} skipped={rep.skipped:<5} {rep.seconds:6.2f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
