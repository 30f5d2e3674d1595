"""Digraph carrier and the structural checkers everything else builds on.

Vertex sets are Python ints used as bitmasks (bit ``u`` set means vertex ``u``
is present), which keeps the search kernels word-parallel for ``n <= 64``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_ORDER = 64


class DigraphError(ValueError):
    """Malformed digraph input or an operation applied outside its domain."""


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def binom2(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class Digraph:
    """Loop-free digraph on vertices ``0..n-1``.

    ``out`` holds one bitmask per vertex: ``out[u]`` is the out-neighbourhood
    of ``u``. Equality is labeled equality; use :mod:`girthforge.canon` for
    isomorphism.
    """

    n: int
    out: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_ORDER:
            raise DigraphError(f"order must be in 1..{MAX_ORDER}, got {self.n}")
        if len(self.out) != self.n:
            raise DigraphError("need exactly one out-mask per vertex")
        full = (1 << self.n) - 1
        for u, m in enumerate(self.out):
            if m & ~full or m < 0:
                raise DigraphError(f"vertex {u} has an out-neighbour outside 0..{self.n - 1}")
            if m >> u & 1:
                raise DigraphError(f"self-loop at vertex {u}")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> Digraph:
        out = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise DigraphError(f"arc ({u}, {v}) out of range for n={n}")
            out[u] |= 1 << v
        return cls(n, tuple(out))

    @classmethod
    def from_adjacency(cls, out_adj: Sequence[Iterable[int]]) -> Digraph:
        """Build from a sequence of out-neighbour collections."""
        return cls(len(out_adj), tuple(mask_of(s) for s in out_adj))

    @cached_property
    def inn(self) -> tuple[int, ...]:
        inn = [0] * self.n
        for u, m in enumerate(self.out):
            for v in bits(m):
                inn[v] |= 1 << u
        return tuple(inn)

    @property
    def out_adj(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(bits(m)) for m in self.out)

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def arc_count(self) -> int:
        return sum(m.bit_count() for m in self.out)

    def arcs(self) -> list[tuple[int, int]]:
        """All arcs in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in bits(self.out[u])]

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.out[u] | self.inn[u]) >> v & 1)

    def out_degree(self, v: int) -> int:
        return self.out[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.inn[v].bit_count()

    def degree(self, v: int) -> int:
        """Number of neighbours, ``|N+(v) | N-(v)|``."""
        return (self.out[v] | self.inn[v]).bit_count()

    def relabel(self, perm: Sequence[int]) -> Digraph:
        """Return the digraph with vertex ``u`` renamed to ``perm[u]``."""
        if sorted(perm) != list(range(self.n)):
            raise DigraphError("relabeling must be a permutation of 0..n-1")
        out = [0] * self.n
        for u, m in enumerate(self.out):
            out[perm[u]] = mask_of(perm[v] for v in bits(m))
        return Digraph(self.n, tuple(out))

    def reverse(self) -> Digraph:
        return Digraph(self.n, self.inn)

    def has_two_cycle(self) -> bool:
        return any(self.out[u] & self.inn[u] for u in range(self.n))


@dataclass(frozen=True)
class DegreeProfile:
    out_deg: tuple[int, ...]
    in_deg: tuple[int, ...]
    deg: tuple[int, ...]

    @property
    def min_out(self) -> int:
        return min(self.out_deg)

    @property
    def min_in(self) -> int:
        return min(self.in_deg)

    @property
    def min_deg(self) -> int:
        return min(self.deg)

    @property
    def max_out(self) -> int:
        return max(self.out_deg)

    @property
    def max_in(self) -> int:
        return max(self.in_deg)

    @property
    def max_deg(self) -> int:
        return max(self.deg)

    def vertices_of_type(self, alpha: int, beta: int) -> list[int]:
        """Vertices with out-degree ``alpha`` and in-degree ``beta``."""
        return [v for v, (a, b) in enumerate(zip(self.out_deg, self.in_deg)) if (a, b) == (alpha, beta)]


def degrees(d: Digraph) -> DegreeProfile:
    return DegreeProfile(
        tuple(d.out_degree(v) for v in d.vertices),
        tuple(d.in_degree(v) for v in d.vertices),
        tuple(d.degree(v) for v in d.vertices),
    )


@dataclass(frozen=True)
class ClassSpec:
    """Parameters ``(n, k, xi, zeta)`` of the class of strong digraphs on ``n``
    vertices with no cycle of length at most ``k``, min out-degree ``>= xi``
    and min in-degree ``>= zeta``."""

    n: int
    k: int
    xi: int = 1
    zeta: int = 1

    def __post_init__(self) -> None:
        if self.n < 1 or self.n > MAX_ORDER:
            raise DigraphError(f"n must be in 1..{MAX_ORDER}")
        if self.k < 2:
            raise DigraphError("k must be >= 2")
        if self.xi < 1 or self.zeta < 1:
            raise DigraphError("xi and zeta must be >= 1")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n, self.k, self.xi, self.zeta)


@dataclass(frozen=True)
class ComponentDecomposition:
    """Strong components in an acyclic order: every arc goes from a component
    to itself or to a later one."""

    components: tuple[int, ...]  # vertex bitmasks
    comp_of: tuple[int, ...]
    orders: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "orders", tuple(c.bit_count() for c in self.components))

    @property
    def h(self) -> int:
        return len(self.components)

    def vertex_sets(self) -> list[list[int]]:
        return [list(bits(c)) for c in self.components]


def _reach(adj: Sequence[int], src: int) -> int:
    seen = 1 << src
    frontier = seen
    while frontier:
        nxt = 0
        for u in bits(frontier):
            nxt |= adj[u]
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def strong_components(d: Digraph) -> ComponentDecomposition:
    """Strong components ordered topologically; among components that are
    simultaneously available, the one holding the smallest vertex goes first."""
    n = d.n
    comp_masks: list[int] = []
    assigned = 0
    for v in range(n):
        if assigned >> v & 1:
            continue
        c = _reach(d.out, v) & _reach(d.inn, v)
        comp_masks.append(c)
        assigned |= c
    # comp_masks is already sorted by minimum vertex
    h = len(comp_masks)
    idx_of = [0] * n
    for i, c in enumerate(comp_masks):
        for v in bits(c):
            idx_of[v] = i
    preds = [0] * h
    for i, c in enumerate(comp_masks):
        outside = 0
        for v in bits(c):
            outside |= d.inn[v]
        outside &= ~c
        for u in bits(outside):
            preds[i] |= 1 << idx_of[u]
    order: list[int] = []
    placed = 0
    while len(order) < h:
        i = next(j for j in range(h) if not placed >> j & 1 and preds[j] & ~placed == 0)
        order.append(i)
        placed |= 1 << i
    rank = {c: r for r, c in enumerate(order)}
    return ComponentDecomposition(
        tuple(comp_masks[i] for i in order),
        tuple(rank[idx_of[v]] for v in range(n)),
    )


def is_strong(d: Digraph) -> bool:
    full = (1 << d.n) - 1
    return _reach(d.out, 0) == full and _reach(d.inn, 0) == full


def girth(d: Digraph) -> int | None:
    """Length of a shortest directed cycle, or ``None`` for an acyclic digraph."""
    best: int | None = None
    for s in range(d.n):
        if d.out[s] & d.inn[s]:
            return 2
        # BFS from s; the first layer that hits an in-neighbour of s closes a cycle
        target = d.inn[s]
        if not target:
            continue
        seen = (1 << s) | d.out[s]
        frontier = d.out[s]
        length = 2
        while frontier and (best is None or length < best):
            if frontier & target:
                best = length
                break
            nxt = 0
            for u in bits(frontier):
                nxt |= d.out[u]
            frontier = nxt & ~seen
            seen |= frontier
            length += 1
    return best


def is_c_le_k_free(d: Digraph, k: int) -> bool:
    g = girth(d)
    return g is None or g > k


def gamma(d: Digraph) -> int:
    """Number of unordered nonadjacent pairs of distinct vertices."""
    total = 0
    full = (1 << d.n) - 1
    for u in range(d.n):
        later = full & ~((1 << (u + 1)) - 1)
        total += (later & ~(d.out[u] | d.inn[u])).bit_count()
    return total


def gamma_between(d: Digraph, p: Iterable[int], q: Iterable[int]) -> int:
    """Nonadjacent pairs ``{u, v}`` with ``u`` in ``p`` and ``v`` in ``q``."""
    pm, qm = mask_of(p), mask_of(q)
    if pm & qm:
        raise DigraphError("vertex sets must be disjoint")
    return sum((qm & ~(d.out[u] | d.inn[u])).bit_count() for u in bits(pm))


def induced(d: Digraph, w: Iterable[int]) -> tuple[Digraph, list[int]]:
    """Subdigraph induced by ``w``, relabeled to ``0..|w|-1`` in ascending
    original order. Returns the digraph and ``orig`` with ``orig[i]`` the
    original label of new vertex ``i``."""
    wm = mask_of(w)
    if not wm:
        raise DigraphError("cannot induce on an empty vertex set")
    if wm >> d.n:
        raise DigraphError("vertex set not contained in V(D)")
    orig = list(bits(wm))
    new = {v: i for i, v in enumerate(orig)}
    out = tuple(mask_of(new[x] for x in bits(d.out[v] & wm)) for v in orig)
    return Digraph(len(orig), out), orig


def remove_vertex(d: Digraph, v: int) -> tuple[Digraph, list[int]]:
    return induced(d, (u for u in range(d.n) if u != v))


def membership_failures(d: Digraph, spec: ClassSpec) -> list[str]:
    """Reasons ``d`` is outside the class named by ``spec`` (empty if member)."""
    if d.n != spec.n:
        raise DigraphError(f"order mismatch: digraph has {d.n} vertices, class wants {spec.n}")
    reasons = []
    g = girth(d)
    if g is not None and g <= spec.k:
        reasons.append(f"girth {g}")
    if not is_strong(d):
        reasons.append("not strong")
    prof = degrees(d)
    if prof.min_out < spec.xi:
        reasons.append(f"δ⁺ = {prof.min_out}")
    if prof.min_in < spec.zeta:
        reasons.append(f"δ⁻ = {prof.min_in}")
    return reasons


def in_class(d: Digraph, spec: ClassSpec) -> bool:
    return not membership_failures(d, spec)


# -- arclist v1 -------------------------------------------------------------


def to_arclist(d: Digraph) -> str:
    lines = [str(d.n)] + [f"{u} {v}" for u, v in d.arcs()]
    return "\n".join(lines) + "\n"


def parse_arclist(text: str) -> Digraph:
    rows = text.split("\n")
    if rows and rows[-1] == "":
        rows.pop()
    if not rows:
        raise DigraphError("empty arclist")
    try:
        n = int(rows[0].strip())
    except ValueError:
        raise DigraphError(f"bad vertex count line: {rows[0]!r}") from None
    if not 1 <= n <= MAX_ORDER:
        raise DigraphError(f"order must be in 1..{MAX_ORDER}")
    out = [0] * n
    for lineno, row in enumerate(rows[1:], start=2):
        parts = row.split()
        if len(parts) != 2:
            raise DigraphError(f"line {lineno}: expected 'u v', got {row!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise DigraphError(f"line {lineno}: non-integer vertex in {row!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise DigraphError(f"line {lineno}: vertex out of range")
        if u == v:
            raise DigraphError(f"line {lineno}: self-loop at {u}")
        if out[u] >> v & 1:
            raise DigraphError(f"line {lineno}: duplicate arc ({u}, {v})")
        out[u] |= 1 << v
    return Digraph(n, tuple(out))


def pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))
