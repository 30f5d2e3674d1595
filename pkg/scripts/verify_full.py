"""Run every acceptance criterion and write the table as JSON.

    python scripts/verify_full.py --tier full --out verify_full.json
"""

import argparse
import json
import sys

from girthforge.verify import TIERS, run_tier


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--tier", choices=TIERS, default="full")
    ap.add_argument("--out")
    args = ap.parse_args()
    rows = run_tier(args.tier, lambda r: print(r.line(), flush=True))
    if args.out:
        data = [r.to_json() | {"elapsed_s": round(r.elapsed, 2)} for r in rows]
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
    return 0 if all(r.passed for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
