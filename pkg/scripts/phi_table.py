"""Exact extremal arc counts for small classes, as CSV.

    python scripts/phi_table.py --max-n 8 --k 3 --xi 1 2 --zeta 1
"""

import argparse
import csv
import sys
import time

from girthforge.core import ClassSpec
from girthforge.search import SearchParams, solve


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--min-n", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--k", type=int, nargs="+", default=[3])
    ap.add_argument("--xi", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--zeta", type=int, nargs="+", default=[1])
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    w = csv.writer(sys.stdout)
    w.writerow(["n", "k", "xi", "zeta", "status", "phi", "classes", "nodes", "seconds"])
    for k in args.k:
        for xi in args.xi:
            for zeta in args.zeta:
                for n in range(max(args.min_n, 2), args.max_n + 1):
                    t0 = time.monotonic()
                    o = solve(SearchParams(ClassSpec(n, k, xi, zeta), workers=args.workers))
                    w.writerow([n, k, xi, zeta, o.status, o.phi, len(o.extremal), o.stats.nodes, f"{time.monotonic() - t0:.2f}"])
                    sys.stdout.flush()


if __name__ == "__main__":
    main()
