"""``girthforge`` command line: construct, check, classify, search, verify-theorems.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
Reports are JSON with sorted keys; wall-clock figures live under ``timing``
so two runs of the same deterministic command differ only there.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from .canon import canonical_string
from .classify import PreconditionError, classify_phi31
from .construct import Phi31FamilyParams, build_phi31, circulant, f8, strong_tournament
from .core import ClassSpec, Digraph, DigraphError, degrees, gamma, girth, is_strong, membership_failures, parse_arclist, to_arclist
from .search import MODES, GuardrailError, SearchParams, solve
from .verify import TIERS, run_tier

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _default_workers() -> int:
    raw = os.environ.get("GIRTHFORGE_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def _report(argv: Sequence[str], params: dict, outcome: dict, t0: float, seed: int | None = None) -> dict:
    rep = {
        "command": list(argv),
        "params": params,
        "outcome": outcome,
        "timing": {"elapsed_s": round(time.monotonic() - t0, 3)},
        "version": __version__,
    }
    if seed is not None:
        rep["seed"] = seed
    return rep


def _read(path: str) -> Digraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return parse_arclist(text)
    except DigraphError as exc:
        raise OSError(f"{path}: {exc}") from exc


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _summary(d: Digraph) -> dict:
    prof = degrees(d)
    return {
        "n": d.n,
        "arcs": d.arc_count,
        "girth": girth(d),
        "strong": is_strong(d),
        "min_out": prof.min_out,
        "min_in": prof.min_in,
        "min_deg": prof.min_deg,
        "gamma": gamma(d),
        "canonical": canonical_string(d),
    }


# -- commands ---------------------------------------------------------------


def cmd_construct(args: argparse.Namespace, argv: Sequence[str]) -> int:
    t0 = time.monotonic()
    if args.kind == "circulant":
        if args.n is None or args.jumps is None:
            raise UsageError("circulant needs --n and --jumps")
        d = circulant(args.n, args.jumps)
    elif args.kind == "f8":
        d = f8()
    elif args.kind == "tournament":
        if args.n is None:
            raise UsageError("tournament needs --n")
        d = strong_tournament(args.n)
    else:
        if args.family is None or args.orders is None:
            raise UsageError("phi31 needs --family and --orders")
        d = build_phi31(Phi31FamilyParams(args.family.upper(), tuple(args.orders), args.middle))
    text = to_arclist(d)
    params = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    rep = _report(argv, params, _summary(d), t0)
    if args.output:
        _write(Path(args.output), text)
        _emit(rep)
    else:
        sys.stdout.write(text)
        sys.stderr.write(json.dumps(rep, sort_keys=True, ensure_ascii=False) + "\n")
    return EXIT_OK


def cmd_check(args: argparse.Namespace, argv: Sequence[str]) -> int:
    t0 = time.monotonic()
    d = _read(args.file)
    spec = ClassSpec(d.n, args.k, args.min_outdeg, args.min_indeg)
    reasons = membership_failures(d, spec)
    outcome = _summary(d) | {"member": not reasons, "reasons": reasons}
    _emit(_report(argv, {"file": args.file, "k": args.k, "xi": args.min_outdeg, "zeta": args.min_indeg}, outcome, t0))
    return EXIT_OK if not reasons else EXIT_FAIL


def cmd_classify(args: argparse.Namespace, argv: Sequence[str]) -> int:
    t0 = time.monotonic()
    d = _read(args.file)
    cls = classify_phi31(d, hub=args.hub)
    _emit(_report(argv, {"file": args.file, "hub": args.hub}, cls.to_json(), t0))
    return EXIT_OK if cls.ok else EXIT_FAIL


def cmd_search(args: argparse.Namespace, argv: Sequence[str]) -> int:
    t0 = time.monotonic()
    spec = ClassSpec(args.n, args.k, args.xi, args.zeta)
    params = SearchParams(
        spec,
        mode=args.mode,
        target_arcs=args.target,
        time_limit=args.time_limit,
        workers=args.workers,
        checkpoint_path=args.checkpoint,
        seed=args.seed,
    )
    out = solve(params)
    outcome = out.to_json()
    files = []
    if args.out_dir:
        root = Path(args.out_dir)
        for i, d in enumerate(out.extremal):
            name = f"n{spec.n}_k{spec.k}_xi{spec.xi}_zeta{spec.zeta}_{i:03d}.arclist"
            _write(root / name, to_arclist(d))
            files.append(str(root / name))
    outcome["files"] = files
    shown = {
        "n": args.n,
        "k": args.k,
        "xi": args.xi,
        "zeta": args.zeta,
        "mode": args.mode,
        "target": args.target,
        "checkpoint": args.checkpoint,
    }
    rep = _report(argv, shown, outcome, t0, seed=args.seed if args.mode == "witness" else None)
    rep["timing"]["search_s"] = round(out.stats.elapsed, 3)
    rep["timing"]["workers"] = args.workers
    if args.out_dir:
        _write(Path(args.out_dir) / "report.json", json.dumps(rep, sort_keys=True, indent=2) + "\n")
    _emit(rep)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, argv: Sequence[str]) -> int:
    t0 = time.monotonic()
    echo = None if args.json else (lambda r: print(r.line(), flush=True))
    rows = run_tier(args.tier, echo)
    ok = all(r.passed for r in rows)
    if args.json:
        _emit(_report(argv, {"tier": args.tier}, {"rows": [r.to_json() for r in rows], "passed": ok}, t0))
    else:
        print(f"{sum(r.passed for r in rows)}/{len(rows)} criteria passed ({args.tier} tier)")
    return EXIT_OK if ok else EXIT_FAIL


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="girthforge", description="Extremal girth-constrained strong digraphs.")
    p.add_argument("--version", action="version", version=f"girthforge {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a named digraph and write it as an arclist")
    c.add_argument("kind", choices=("circulant", "f8", "tournament", "phi31"))
    c.add_argument("output", nargs="?", help="arclist path (stdout if omitted)")
    c.add_argument("--n", type=int)
    c.add_argument("--jumps", type=_ints)
    c.add_argument("--family")
    c.add_argument("--orders", type=_ints)
    c.add_argument("--middle", help="x/y/z tag per middle singleton")
    c.set_defaults(func=cmd_construct)

    k = sub.add_parser("check", help="report girth, strongness, degrees and class membership")
    k.add_argument("file")
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--min-outdeg", type=int, default=1)
    k.add_argument("--min-indeg", type=int, default=1)
    k.set_defaults(func=cmd_check)

    f = sub.add_parser("classify", help="family decomposition of an extremal (n,3,1,1) digraph")
    f.add_argument("file")
    f.add_argument("--hub", type=int)
    f.set_defaults(func=cmd_classify)

    s = sub.add_parser("search", help="exact, emptiness or witness search")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--xi", type=int, default=1)
    s.add_argument("--zeta", type=int, default=1)
    s.add_argument("--mode", choices=MODES, default="exact")
    s.add_argument("--target", type=int)
    s.add_argument("--checkpoint")
    s.add_argument("--workers", type=int, default=_default_workers())
    s.add_argument("--time-limit", type=float)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_search)

    v = sub.add_parser("verify-theorems", help="run the acceptance criteria")
    v.add_argument("--tier", choices=TIERS, default="fast")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, argv)
    except OSError as exc:
        print(f"girthforge: {exc}", file=sys.stderr)
        return EXIT_IO
    except PreconditionError as exc:
        print(f"girthforge: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, GuardrailError, ValueError) as exc:
        print(f"girthforge: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
