"""Canonical labeling and isomorphism testing for small digraphs.

The canonical form is the lexicographically smallest adjacency bit-matrix over
the leaves of an individualization-refinement search tree. Cells are refined
on (colour, out-neighbour colours, in-neighbour colours) until equitable;
automorphisms discovered at equal leaves prune sibling branches in the same
orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Digraph, bits


@dataclass(frozen=True)
class CanonicalForm:
    relabeling: tuple[int, ...]  # relabeling[old] = new
    canonical_bytes: bytes
    n: int

    def to_string(self) -> str:
        return f"{self.n}:{self.canonical_bytes.hex()}"

    def digraph(self) -> Digraph:
        return digraph_from_bytes(self.n, self.canonical_bytes)


def _refine(n: int, out: Sequence[int], inn: Sequence[int], colors: list[int]) -> list[int]:
    ranked0 = sorted(set(colors))
    if ranked0[-1] != len(ranked0) - 1:
        index0 = {c: r for r, c in enumerate(ranked0)}
        colors = [index0[c] for c in colors]
    ncells = len(ranked0)
    while True:
        sigs = []
        for v in range(n):
            o = sorted([colors[u] for u in bits(out[v])])
            i = sorted([colors[u] for u in bits(inn[v])])
            sigs.append((colors[v], tuple(o), tuple(i)))
        ranked = sorted(set(sigs))
        if len(ranked) == ncells:
            return colors
        index = {s: r for r, s in enumerate(ranked)}
        colors = [index[s] for s in sigs]
        ncells = len(ranked)


def _individualize(colors: list[int], v: int) -> list[int]:
    # v moves in front of the rest of its cell
    c = colors[v]
    return [2 * x + (0 if u == v else (1 if x == c else 0)) for u, x in enumerate(colors)]


def _rows(n: int, out: Sequence[int], lab: Sequence[int]) -> tuple[int, ...]:
    rows = [0] * n
    top = n - 1
    for u in range(n):
        r = 0
        for w in bits(out[u]):
            r |= 1 << (top - lab[w])
        rows[lab[u]] = r
    return tuple(rows)


def _pack(n: int, rows: Sequence[int]) -> bytes:
    big = 0
    for r in rows:
        big = (big << n) | r
    nbits = n * n
    nbytes = (nbits + 7) // 8
    return (big << (nbytes * 8 - nbits)).to_bytes(nbytes, "big")


def _orbit_rep(perms: list[tuple[int, ...]], n: int) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in perms:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(x) for x in range(n)]


def canonical_labeling(n: int, out: Sequence[int], inn: Sequence[int] | None = None) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Return ``(relabeling, rows)`` of the canonical form of the digraph given
    by out-neighbour bitmasks. ``rows[i]`` has column 0 in its top bit."""
    if inn is None:
        inn_l = [0] * n
        for u in range(n):
            for v in bits(out[u]):
                inn_l[v] |= 1 << u
        inn = inn_l
    best_rows: tuple[int, ...] | None = None
    best_lab: tuple[int, ...] | None = None
    autos: list[tuple[int, ...]] = []

    def search(colors: list[int], prefix: tuple[int, ...]) -> None:
        nonlocal best_rows, best_lab
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min((c for c, k in counts.items() if k > 1), default=None)
        if target is None:
            lab = tuple(colors)
            rows = _rows(n, out, lab)
            if best_rows is None or rows < best_rows:
                best_rows, best_lab = rows, lab
            elif rows == best_rows:
                # best_lab^-1 . lab is an automorphism
                inv = [0] * n
                for v, p in enumerate(best_lab):
                    inv[p] = v
                g = tuple(inv[lab[v]] for v in range(n))
                if any(g[v] != v for v in range(n)):
                    autos.append(g)
            return
        cell = [v for v in range(n) if colors[v] == target]
        done: list[int] = []
        for v in cell:
            if done:
                fixing = [g for g in autos if all(g[p] == p for p in prefix)]
                if fixing:
                    rep = _orbit_rep(fixing, n)
                    if any(rep[v] == rep[u] for u in done):
                        continue
            search(_refine(n, out, inn, _individualize(colors, v)), prefix + (v,))
            done.append(v)

    search(_refine(n, out, inn, [0] * n), ())
    assert best_rows is not None and best_lab is not None
    own = _rows(n, out, tuple(range(n)))
    if own == best_rows:
        return tuple(range(n)), best_rows
    return best_lab, best_rows


def canonical_key(n: int, out: Sequence[int], inn: Sequence[int] | None = None) -> bytes:
    return _pack(n, canonical_labeling(n, out, inn)[1])


def canonical_form(d: Digraph) -> CanonicalForm:
    lab, rows = canonical_labeling(d.n, d.out, d.inn)
    return CanonicalForm(lab, _pack(d.n, rows), d.n)


def canonical_string(d: Digraph) -> str:
    return canonical_form(d).to_string()


def digraph_from_bytes(n: int, data: bytes) -> Digraph:
    """Inverse of the row-major bit packing used for ``canonical_bytes``."""
    nbits = n * n
    nbytes = (nbits + 7) // 8
    if len(data) != nbytes:
        raise ValueError(f"expected {nbytes} bytes for n={n}, got {len(data)}")
    big = int.from_bytes(data, "big") >> (nbytes * 8 - nbits)
    out = []
    for u in range(n):
        row = (big >> ((n - 1 - u) * n)) & ((1 << n) - 1)
        out.append(sum(1 << v for v in range(n) if row >> (n - 1 - v) & 1))
    return Digraph(n, tuple(out))


def parse_canonical_string(s: str) -> Digraph:
    n_str, _, hexpart = s.partition(":")
    return digraph_from_bytes(int(n_str), bytes.fromhex(hexpart))


def are_isomorphic(d1: Digraph, d2: Digraph) -> bool:
    if d1.n != d2.n or d1.arc_count != d2.arc_count:
        return False
    return canonical_form(d1).canonical_bytes == canonical_form(d2).canonical_bytes


def dedup_by_iso(digraphs: Iterable[Digraph]) -> list[Digraph]:
    """One representative per isomorphism class, keeping first occurrences."""
    seen: set[tuple[int, bytes]] = set()
    kept = []
    for d in digraphs:
        key = (d.n, canonical_form(d).canonical_bytes)
        if key not in seen:
            seen.add(key)
            kept.append(d)
    return kept
