"""Exact extremal arc counts and isomorph-free extremal sets by exhaustive search.

Digraphs are grown one vertex at a time: appending vertex ``m`` decides the
states of the pairs ``(0, m), ..., (m-1, m)`` (no arc, forward, backward), so
pair states are fixed in colexicographic order. After every vertex the
frontier is reduced to one canonical representative per isomorphism class.

Every member ``D`` of the class with ``gamma(D) <= G`` is reached along the
chain obtained by repeatedly deleting a vertex with the most nonadjacent
pairs; along that chain the prefix on ``m`` vertices has at most ``B_m``
nonadjacent pairs, where ``B_n = G`` and ``B_m = B_{m+1} - ceil(2 B_{m+1} / (m+1))``.

Pruning rules (each can be switched off without changing results):

* ``short_cycle``: the new vertex may not close a cycle of length ``<= k``.
* ``gamma_budget``: prefixes respect the chained budgets ``B_m``.
* ``degree``: every vertex must still be able to reach out/in-degree ``xi``/``zeta``
  with the vertices still to come.
* ``strong``: when appending the last vertex it must receive an arc from every
  sink component and send one to every source component of the prefix.
* ``augmentation``: the appended vertex has the most nonadjacent pairs in the
  child, so only the deletion chain above is followed.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import struct
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import ceil, comb
from typing import Iterable, Sequence

from .canon import canonical_form, canonical_labeling
from .core import (
    ClassSpec,
    Digraph,
    DigraphError,
    bits,
    degrees,
    in_class,
    is_strong,
    remove_vertex,
    strong_components,
)

log = logging.getLogger(__name__)

EXACT_MAX_N = 12
WITNESS_MAX_N = 20
MODES = ("exact", "witness", "emptiness")
CHECKPOINT_MAGIC = b"GFCK1"


class GuardrailError(ValueError):
    pass


class CheckpointError(RuntimeError):
    pass


class InvariantViolation(AssertionError):
    """A statement proven in the literature failed on a concrete digraph."""


@dataclass(frozen=True)
class PruneRules:
    short_cycle: bool = True
    gamma_budget: bool = True
    degree: bool = True
    strong: bool = True
    augmentation: bool = True

    @classmethod
    def all_but(cls, name: str) -> PruneRules:
        if name not in cls.__dataclass_fields__:
            raise ValueError(f"unknown pruning rule {name!r}")
        return cls(**{name: False})


@dataclass(frozen=True)
class SearchParams:
    spec: ClassSpec
    mode: str = "exact"
    target_arcs: int | None = None
    gamma_budget: int | None = None
    time_limit: float | None = None
    workers: int = 1
    checkpoint_path: str | None = None
    seed: int = 0
    rules: PruneRules = PruneRules()

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        full = comb(self.spec.n, 2)
        t, g = self.target_arcs, self.gamma_budget
        if t is not None and not 0 <= t <= full:
            raise ValueError(f"target_arcs must lie in 0..{full}")
        if g is not None and not 0 <= g <= full:
            raise ValueError(f"gamma_budget must lie in 0..{full}")
        if t is not None and g is not None and t + g != full:
            raise ValueError("target_arcs + gamma_budget must equal C(n, 2)")
        if self.mode == "witness" and t is None and g is None:
            raise ValueError("witness mode needs target_arcs or gamma_budget")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        limit = WITNESS_MAX_N if self.mode == "witness" else EXACT_MAX_N
        if self.spec.n > limit:
            raise GuardrailError(f"{self.mode} mode is limited to n <= {limit}")

    @property
    def target(self) -> int | None:
        if self.target_arcs is not None:
            return self.target_arcs
        if self.gamma_budget is not None:
            return comb(self.spec.n, 2) - self.gamma_budget
        return None

    def fingerprint(self) -> bytes:
        """Hash of everything that determines the result (not workers, limits, paths)."""
        payload = {
            "spec": list(self.spec.as_tuple()),
            "mode": self.mode,
            "target": self.target,
            "seed": self.seed if self.mode == "witness" else None,
            "rules": asdict(self.rules),
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).digest()


@dataclass
class SearchStats:
    nodes: int = 0
    children: int = 0
    leaves: int = 0
    prunes: Counter = field(default_factory=Counter)
    level_sizes: dict[int, list[int]] = field(default_factory=dict)
    elapsed: float = 0.0

    def merge(self, other: SearchStats) -> None:
        self.nodes += other.nodes
        self.children += other.children
        self.leaves += other.leaves
        self.prunes.update(other.prunes)

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "children": self.children,
            "leaves": self.leaves,
            "prunes": dict(sorted(self.prunes.items())),
            "level_sizes": {str(g): v for g, v in sorted(self.level_sizes.items())},
        }


@dataclass
class SearchOutcome:
    params: SearchParams
    status: str  # proved | witness_found | empty | timeout
    phi: int | None = None
    extremal: list[Digraph] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)
    resumable: bool = False

    def canonical_strings(self) -> list[str]:
        return [canonical_form(d).to_string() for d in self.extremal]

    def to_json(self) -> dict:
        p = self.params
        return {
            "spec": dict(zip(("n", "k", "xi", "zeta"), p.spec.as_tuple())),
            "mode": p.mode,
            "target_arcs": p.target,
            "seed": p.seed,
            "status": self.status,
            "phi": self.phi,
            "classes": len(self.extremal),
            "canonical": self.canonical_strings(),
            "stats": self.stats.to_json(),
            "resumable": self.resumable,
        }


# -- search kernel ----------------------------------------------------------


@dataclass(frozen=True)
class _Ctx:
    n: int
    k: int
    xi: int
    zeta: int
    budgets: tuple[int, ...]  # budgets[m] caps gamma of an m-vertex prefix
    rules: PruneRules


def chain_budgets(n: int, g: int, tighten: bool = True) -> tuple[int, ...]:
    b = [0] * (n + 1)
    b[n] = g
    for m in range(n - 1, -1, -1):
        b[m] = b[m + 1] - ceil(2 * b[m + 1] / (m + 1)) if tighten else b[m + 1]
        b[m] = max(b[m], 0)
    return tuple(b)


def _inn(m: int, out: Sequence[int]) -> list[int]:
    inn = [0] * m
    for u in range(m):
        for v in bits(out[u]):
            inn[v] |= 1 << u
    return inn


def _short_reach(m: int, adj: Sequence[int], steps: int) -> list[int]:
    """reach[u] = vertices at distance 1..steps from u."""
    if steps <= 0:
        return [0] * m
    reach = list(adj)
    for _ in range(steps - 1):
        nxt = []
        for u in range(m):
            r = reach[u]
            acc = r
            for v in bits(r):
                acc |= adj[v]
            nxt.append(acc)
        reach = nxt
    return [reach[u] & ~(1 << u) for u in range(m)]


def _children(
    out: tuple[int, ...], ctx: _Ctx, stats: SearchStats, rng: random.Random | None = None
) -> list[tuple[int, ...]]:
    """All admissible one-vertex extensions of the prefix ``out``."""
    m = len(out)
    n, rules = ctx.n, ctx.rules
    r = n - m - 1
    stats.nodes += 1
    inn = _inn(m, out)
    dout = [x.bit_count() for x in out]
    din = [x.bit_count() for x in inn]
    gamma_p = comb(m, 2) - sum(dout)

    forced_i = forced_o = 0
    need_out_w = need_in_w = 0
    if rules.degree:
        for u in range(m):
            if dout[u] + r < ctx.xi:
                if dout[u] + r + 1 < ctx.xi:
                    stats.prunes["degree"] += 1
                    return []
                forced_i |= 1 << u
            if din[u] + r < ctx.zeta:
                if din[u] + r + 1 < ctx.zeta:
                    stats.prunes["degree"] += 1
                    return []
                forced_o |= 1 << u
        if forced_i & forced_o:
            stats.prunes["degree"] += 1
            return []
        need_out_w = max(0, ctx.xi - r)
        need_in_w = max(0, ctx.zeta - r)

    zmax = m
    if rules.gamma_budget:
        zmax = min(m, ctx.budgets[m + 1] - gamma_p)
        if zmax < 0:
            stats.prunes["gamma_budget"] += 1
            return []

    nonadj = [m - 1 - (out[u] | inn[u]).bit_count() for u in range(m)]
    if rules.augmentation and m and max(nonadj) > zmax:
        stats.prunes["augmentation"] += 1
        return []

    if rules.short_cycle:
        fwd = _short_reach(m, out, ctx.k - 2)
        bwd = _short_reach(m, inn, ctx.k - 2)
    else:
        fwd = bwd = [0] * m

    sources = sinks = ()
    last = r == 0
    if last and rules.strong and m:
        dec = strong_components(Digraph(m, out))
        comp_in = [0] * dec.h
        comp_out = [0] * dec.h
        for i, c in enumerate(dec.components):
            for v in bits(c):
                comp_in[i] |= inn[v]
                comp_out[i] |= out[v]
            comp_in[i] &= ~c
            comp_out[i] &= ~c
        sources = tuple(c for i, c in enumerate(dec.components) if not comp_in[i])
        sinks = tuple(c for i, c in enumerate(dec.components) if not comp_out[i])

    order = list(range(m))
    if rng is not None:
        rng.shuffle(order)
    results: list[tuple[int, int]] = []
    aug = rules.augmentation

    def rec(idx: int, o: int, i: int, fi: int, fo: int, z: int) -> None:
        if idx == m:
            if o.bit_count() < need_out_w or i.bit_count() < need_in_w:
                stats.prunes["degree"] += 1
                return
            if aug:
                top = 0
                for u in range(m):
                    a = nonadj[u] + (0 if (o | i) >> u & 1 else 1)
                    if a > top:
                        top = a
                if top > z:
                    stats.prunes["augmentation"] += 1
                    return
            if sources or sinks:
                if any(not o & c for c in sources) or any(not i & c for c in sinks):
                    stats.prunes["strong"] += 1
                    return
            results.append((o, i))
            return
        u = order[idx]
        b = 1 << u
        opts = ("o", "i", "z")
        if rng is not None:
            opts = tuple(rng.sample(opts, 3))
        for opt in opts:
            if opt == "o":
                if forced_i & b:
                    continue
                if fo & b:
                    stats.prunes["short_cycle"] += 1
                    continue
                rec(idx + 1, o | b, i, fi | fwd[u], fo, z)
            elif opt == "i":
                if forced_o & b:
                    continue
                if fi & b:
                    stats.prunes["short_cycle"] += 1
                    continue
                rec(idx + 1, o, i | b, fi, fo | bwd[u], z)
            else:
                if (forced_i | forced_o) & b:
                    continue
                if z + 1 > zmax:
                    stats.prunes["gamma_budget"] += 1
                    continue
                if aug and nonadj[u] + 1 > zmax:
                    stats.prunes["augmentation"] += 1
                    continue
                rec(idx + 1, o, i, fi, fo, z + 1)

    rec(0, 0, 0, 0, 0, 0)
    kids = []
    w = 1 << m
    for o, i in results:
        child = [x | w if i >> u & 1 else x for u, x in enumerate(out)]
        child.append(o)
        kids.append(tuple(child))
    stats.children += len(kids)
    return kids


def _rows_to_out(n: int, rows: Sequence[int]) -> tuple[int, ...]:
    top = n - 1
    return tuple(sum(1 << v for v in range(n) if row >> (top - v) & 1) for row in rows)


def _canon(out: tuple[int, ...]) -> tuple[bytes, tuple[int, ...]]:
    m = len(out)
    _, rows = canonical_labeling(m, out)
    width = (m + 7) // 8
    key = b"".join(r.to_bytes(width, "big") for r in rows)
    return key, _rows_to_out(m, rows)


def _accept_leaf(out: tuple[int, ...], spec: ClassSpec, max_gamma: int, stats: SearchStats) -> bool:
    stats.leaves += 1
    d = Digraph(len(out), out)
    if d.arc_count < comb(d.n, 2) - max_gamma:
        stats.prunes["leaf_arcs"] += 1
        return False
    if not in_class(d, spec):
        stats.prunes["leaf_class"] += 1
        return False
    return True


def _expand_chunk(args: tuple) -> tuple[dict[bytes, tuple[int, ...]], SearchStats]:
    frontier, ctx, spec, max_gamma = args
    stats = SearchStats()
    found: dict[bytes, tuple[int, ...]] = {}
    is_last = len(frontier[0]) + 1 == ctx.n if frontier else False
    for out in frontier:
        for child in _children(out, ctx, stats):
            if is_last and not _accept_leaf(child, spec, max_gamma, stats):
                continue
            key, rep = _canon(child)
            if key in found:
                stats.prunes["isomorph"] += 1
            else:
                found[key] = rep
    return found, stats


def _chunks(items: list, parts: int) -> list[list]:
    parts = max(1, min(parts, len(items)))
    size = ceil(len(items) / parts)
    return [items[i : i + size] for i in range(0, len(items), size)]


# -- checkpoints ------------------------------------------------------------


def _pair_states(out: Sequence[int]) -> bytes:
    m = len(out)
    states = bytearray()
    for v in range(1, m):
        for u in range(v):
            states.append(1 if out[u] >> v & 1 else (2 if out[v] >> u & 1 else 0))
    return bytes(states)


def _from_pair_states(m: int, states: bytes) -> tuple[int, ...]:
    out = [0] * m
    idx = 0
    for v in range(1, m):
        for u in range(v):
            s = states[idx]
            if s == 1:
                out[u] |= 1 << v
            elif s == 2:
                out[v] |= 1 << u
            elif s != 0:
                raise CheckpointError(f"invalid pair state {s}")
            idx += 1
    return tuple(out)


def write_checkpoint(path: str, params: SearchParams, gamma: int, level: int, frontier: list[tuple[int, ...]]) -> None:
    body = bytearray(struct.pack(">HHI", gamma, level, len(frontier)))
    for out in frontier:
        body += _pair_states(out)
    blob = CHECKPOINT_MAGIC + params.fingerprint() + bytes(body)
    blob += hashlib.sha256(blob).digest()
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(blob)
    os.replace(tmp, path)


def read_checkpoint(path: str, params: SearchParams) -> tuple[int, int, list[tuple[int, ...]]]:
    """Return ``(gamma, level, frontier)`` saved for ``params``."""
    with open(path, "rb") as fh:
        blob = fh.read()
    head = len(CHECKPOINT_MAGIC)
    if len(blob) < head + 32 + 8 + 32 or blob[:head] != CHECKPOINT_MAGIC:
        raise CheckpointError(f"{path}: not a GFCK1 checkpoint")
    if hashlib.sha256(blob[:-32]).digest() != blob[-32:]:
        raise CheckpointError(f"{path}: checksum mismatch (corrupted checkpoint)")
    if blob[head : head + 32] != params.fingerprint():
        raise CheckpointError(f"{path}: checkpoint belongs to different search parameters")
    body = blob[head + 32 : -32]
    gamma, level, count = struct.unpack(">HHI", body[:8])
    width = comb(level, 2)
    if len(body) != 8 + count * width:
        raise CheckpointError(f"{path}: truncated frontier")
    frontier = [_from_pair_states(level, body[8 + j * width : 8 + (j + 1) * width]) for j in range(count)]
    return gamma, level, frontier


# -- drivers ----------------------------------------------------------------


def _min_arcs(spec: ClassSpec) -> int:
    if spec.n == 1:
        return 0
    return spec.n * max(spec.xi, spec.zeta, 1)


class _Timeout(Exception):
    pass


def _run_levels(
    params: SearchParams,
    g: int,
    stats: SearchStats,
    deadline: float | None,
    start_level: int = 1,
    start_frontier: list[tuple[int, ...]] | None = None,
    pool: ProcessPoolExecutor | None = None,
) -> list[tuple[int, ...]]:
    """Breadth-first enumeration of all class members with gamma <= g."""
    spec = params.spec
    n = spec.n
    ctx = _Ctx(n, spec.k, spec.xi, spec.zeta, chain_budgets(n, g, params.rules.gamma_budget), params.rules)
    frontier = start_frontier if start_frontier is not None else [(0,)]
    level = start_level
    sizes = stats.level_sizes.setdefault(g, [])
    if level == 1 and n == 1:
        return [o for o in frontier if _accept_leaf(o, spec, g, stats)]
    while level < n:
        sizes.append(len(frontier))
        if not frontier:
            return []
        jobs = [(chunk, ctx, spec, g) for chunk in _chunks(frontier, params.workers * 4 if pool else 1)]
        results = pool.map(_expand_chunk, jobs) if pool else map(_expand_chunk, jobs)
        merged: dict[bytes, tuple[int, ...]] = {}
        for found, st in results:
            stats.merge(st)
            for key, rep in found.items():
                if key in merged:
                    stats.prunes["isomorph"] += 1
                else:
                    merged[key] = rep
        level += 1
        frontier = [merged[key] for key in sorted(merged)]
        if params.checkpoint_path and level < n:
            write_checkpoint(params.checkpoint_path, params, g, level, frontier)
        # checked after expanding so every (resumed) run advances at least one level
        if deadline is not None and level < n and time.monotonic() > deadline:
            raise _Timeout((g, level, frontier))
    sizes.append(len(frontier))
    return frontier


def solve(params: SearchParams) -> SearchOutcome:
    """Run the search described by ``params``; timeouts are reported in the status."""
    t0 = time.monotonic()
    if params.mode == "witness":
        out = _solve_witness(params)
    else:
        out = _solve_exhaustive(params)
    out.stats.elapsed = time.monotonic() - t0
    return out


def _solve_exhaustive(params: SearchParams) -> SearchOutcome:
    spec = params.spec
    n = spec.n
    stats = SearchStats()
    full = comb(n, 2)
    g_max = full - _min_arcs(spec)
    floor = params.target
    if floor is not None:
        g_max = min(g_max, full - floor)
    deadline = time.monotonic() + params.time_limit if params.time_limit else None

    g_start, resume_level, resume_frontier = 0, 1, None
    if params.checkpoint_path and os.path.exists(params.checkpoint_path):
        g_start, resume_level, resume_frontier = read_checkpoint(params.checkpoint_path, params)
        log.info("resuming from %s at gamma=%d level=%d", params.checkpoint_path, g_start, resume_level)

    budgets = [g_max] if params.mode == "emptiness" else list(range(g_start, g_max + 1))
    if params.mode == "emptiness" and resume_frontier is not None and g_start != g_max:
        raise CheckpointError("emptiness checkpoint has an unexpected budget")
    pool = ProcessPoolExecutor(params.workers) if params.workers > 1 else None
    try:
        for g in budgets:
            resuming = resume_frontier is not None and g == g_start
            try:
                found = _run_levels(
                    params,
                    g,
                    stats,
                    deadline,
                    resume_level if resuming else 1,
                    resume_frontier if resuming else None,
                    pool,
                )
            except _Timeout as exc:
                tg, tl, frontier = exc.args[0]
                if params.checkpoint_path:
                    write_checkpoint(params.checkpoint_path, params, tg, tl, frontier)
                return SearchOutcome(params, "timeout", stats=stats, resumable=bool(params.checkpoint_path))
            if found:
                graphs = [Digraph(n, o) for o in found]
                if params.mode == "emptiness":
                    status, phi = "witness_found", max(d.arc_count for d in graphs)
                    graphs = [d for d in graphs if d.arc_count == phi][:1]
                else:
                    status, phi = "proved", max(d.arc_count for d in graphs)
                    graphs = [d for d in graphs if d.arc_count == phi]
                _assert_sound(graphs, spec, phi)
                _clear(params)
                return SearchOutcome(params, status, phi, graphs, stats)
    finally:
        if pool is not None:
            pool.shutdown()
    _clear(params)
    return SearchOutcome(params, "empty", 0, [], stats)


def _clear(params: SearchParams) -> None:
    if params.checkpoint_path and os.path.exists(params.checkpoint_path):
        os.remove(params.checkpoint_path)


def _assert_sound(graphs: Iterable[Digraph], spec: ClassSpec, phi: int) -> None:
    for d in graphs:
        if not in_class(d, spec) or d.arc_count != phi:
            raise InvariantViolation(f"search emitted a digraph outside {spec} or with wrong arc count")


def _solve_witness(params: SearchParams) -> SearchOutcome:
    spec = params.spec
    n = spec.n
    target = params.target
    assert target is not None
    g = comb(n, 2) - target
    stats = SearchStats()
    if target < _min_arcs(spec) and g < 0:
        return SearchOutcome(params, "empty", 0, [], stats)
    ctx = _Ctx(n, spec.k, spec.xi, spec.zeta, chain_budgets(n, g, params.rules.gamma_budget), params.rules)
    deadline = time.monotonic() + params.time_limit if params.time_limit else None
    dead: set[bytes] = set()  # prefixes whose subtree is known to hold no witness
    restart = 0
    budget = 2000
    while True:
        rng = random.Random(f"{params.seed}:{restart}")
        state = {"left": budget}
        try:
            hit = _dfs((0,), ctx, spec, g, stats, rng, dead, state, deadline)
        except _Timeout:
            return SearchOutcome(params, "timeout", stats=stats)
        except _Budget:
            hit = None
        if hit is not None:
            d = Digraph(n, hit)
            _assert_sound([d], spec, d.arc_count)
            stats.prunes["restarts"] = restart
            return SearchOutcome(params, "witness_found", d.arc_count, [d], stats)
        if state["left"] > 0:
            # the whole tree was exhausted: nothing reaches the target
            return SearchOutcome(params, "empty", 0, [], stats)
        restart += 1
        budget *= 2


class _Budget(Exception):
    pass


def _dfs(out, ctx, spec, g, stats, rng, dead, state, deadline):
    if state["left"] <= 0:
        raise _Budget
    state["left"] -= 1
    if deadline is not None and stats.nodes % 256 == 0 and time.monotonic() > deadline:
        raise _Timeout
    kids = _children(out, ctx, stats, rng)
    rng.shuffle(kids)
    last = len(out) + 1 == ctx.n
    exhausted = True
    for child in kids:
        if last:
            if _accept_leaf(child, spec, g, stats):
                return child
            continue
        key, _ = _canon(child)
        if key in dead:
            stats.prunes["isomorph"] += 1
            continue
        try:
            hit = _dfs(child, ctx, spec, g, stats, rng, dead, state, deadline)
        except _Budget:
            exhausted = False
            break
        if hit is not None:
            return hit
        dead.add(key)
    if not exhausted:
        raise _Budget
    return None


# -- conjecture instances and vertex deletion ------------------------------


def _instance(n: int, r: int, zeta: int, workers: int) -> bool:
    if n > EXACT_MAX_N:
        raise GuardrailError(f"instances are limited to n <= {EXACT_MAX_N}")
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    if r > n - 1:
        return True  # no vertex can have out-degree r
    k = max(2, -(-n // r))
    out = solve(SearchParams(ClassSpec(n, k, r, zeta), mode="emptiness", workers=workers))
    return out.status == "empty"


def check_ch_instance(n: int, r: int, workers: int = 1) -> bool:
    """True iff no C_{<=ceil(n/r)}-free strong digraph on n vertices has min out-degree r."""
    return _instance(n, r, 1, workers)


def check_bcw_instance(n: int, r: int, workers: int = 1) -> bool:
    """Same with min in-degree r as well."""
    return _instance(n, r, r, workers)


def find_strong_preserving_vertex(d: Digraph) -> int:
    """A vertex whose deletion leaves ``d`` strong (smallest index first)."""
    if d.n < 2 or not is_strong(d) or degrees(d).min_out < 2:
        raise DigraphError("need a strong digraph with minimum out-degree at least 2")
    for v in range(d.n):
        if is_strong(remove_vertex(d, v)[0]):
            return v
    raise InvariantViolation("no vertex deletion keeps this digraph strong")
