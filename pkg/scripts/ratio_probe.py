#!/usr/bin/env python3
"""Probe how far OPT drifts above the TSP and MST lower bounds.

Solves small instances of a chosen family to optimality and tabulates
OPT/TSP and OPT/MST.  On the cycle family the OPT/TSP column creeps
upward with n; run with a larger --max-n (and patience) to extend it.

Example:
    python3 scripts/ratio_probe.py --family cycle --n-range 5..9 --csv
"""

from __future__ import annotations

import argparse
import sys
import time

from bmep.cli import ratio_rows


def parse_range(text: str) -> range:
    lo, hi = (int(x) for x in text.split(".."))
    return range(lo, hi + 1)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--family", choices=["cycle", "star"], default="cycle")
    parser.add_argument("--n-range", default="5..9", help="inclusive, e.g. 5..9")
    parser.add_argument("--max-n", type=int, default=10)
    parser.add_argument("--csv", action="store_true")
    args = parser.parse_args()

    ns = parse_range(args.n_range)
    t0 = time.perf_counter()
    rows = ratio_rows(args.family, ns, max_n=args.max_n)
    elapsed = time.perf_counter() - t0

    if args.csv:
        print("family,n,opt,tsp,mst,opt_over_tsp,opt_over_mst")
        for r in rows:
            print(
                f"{args.family},{r['n']},{r['opt']},{r['tsp']},{r['mst']},"
                f"{r['opt_over_tsp']!r},{r['opt_over_mst']!r}"
            )
        return 0

    print(f"family={args.family}  ({elapsed:.1f}s)")
    print(f"{'n':>3}  {'OPT':>10}  {'TSP':>6}  {'MST':>6}  {'OPT/TSP':>8}  {'OPT/MST':>8}")
    for r in rows:
        print(
            f"{r['n']:>3}  {str(r['opt']):>10}  {r['tsp']:>6}  {r['mst']:>6}"
            f"  {r['opt_over_tsp']:>8.4f}  {r['opt_over_mst']:>8.4f}"
        )
    bad = [r["n"] for r in rows if float(r["opt"]) < float(r["tsp"])]
    if bad:
        print(f"WARNING: OPT < TSP at n={bad}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
