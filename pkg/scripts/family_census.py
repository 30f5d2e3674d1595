"""Family tags of every extremal (n, 3, 1, 1) digraph, and how often the tag
depends on the chosen hub.

    python scripts/family_census.py --max-n 9
"""

import argparse
from collections import Counter

from girthforge.canon import canonical_string
from girthforge.classify import classify_phi31
from girthforge.construct import build_phi31, enumerate_phi31_params
from girthforge.core import ClassSpec
from girthforge.search import SearchParams, solve


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--min-n", type=int, default=5)
    ap.add_argument("--max-n", type=int, default=8)
    args = ap.parse_args()
    print(f"{'n':>3} {'classes':>8} {'recipes':>8} {'match':>6} {'mixed':>6}  families")
    for n in range(args.min_n, args.max_n + 1):
        ext = solve(SearchParams(ClassSpec(n, 3, 1, 1))).extremal
        recipes = enumerate_phi31_params(n)
        built = {canonical_string(build_phi31(p)) for p in recipes}
        match = built == {canonical_string(d) for d in ext}
        tags, mixed = Counter(), 0
        for d in ext:
            cls = classify_phi31(d)
            tags[cls.family] += 1
            mixed += not cls.consistent
        print(f"{n:>3} {len(ext):>8} {len(recipes):>8} {str(match):>6} {mixed:>6}  {dict(sorted(tags.items()))}")


if __name__ == "__main__":
    main()
