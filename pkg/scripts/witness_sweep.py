"""Seeded witness searches for the (n, 3, 2, 1) lower bound C(n-1,2) - 2.

Writes one CSV row per (n, seed) and stores each witness as an arclist.

    python scripts/witness_sweep.py --n 10 11 --seeds 0 1 2 --out-dir witnesses
"""

import argparse
import csv
import sys
import time
from math import comb
from pathlib import Path

from girthforge.core import ClassSpec, to_arclist
from girthforge.search import SearchParams, solve


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[10, 11])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--time-limit", type=float, default=3600)
    ap.add_argument("--out-dir", type=Path)
    args = ap.parse_args()

    w = csv.writer(sys.stdout)
    w.writerow(["n", "target", "seed", "status", "arcs", "nodes", "restarts", "seconds"])
    for n in args.n:
        target = comb(n - 1, 2) - 2
        for seed in args.seeds:
            t0 = time.monotonic()
            o = solve(SearchParams(ClassSpec(n, 3, 2, 1), mode="witness", target_arcs=target, seed=seed, time_limit=args.time_limit))
            w.writerow([n, target, seed, o.status, o.phi, o.stats.nodes, o.stats.prunes.get("restarts", ""), f"{time.monotonic() - t0:.1f}"])
            sys.stdout.flush()
            if args.out_dir and o.extremal:
                args.out_dir.mkdir(parents=True, exist_ok=True)
                (args.out_dir / f"witness_n{n}_seed{seed}.arclist").write_text(to_arclist(o.extremal[0]))


if __name__ == "__main__":
    main()
