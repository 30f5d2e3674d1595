"""Explicit digraph families and closed-form extremal values."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable

from .core import ClassSpec, Digraph, DigraphError, bits, degrees, in_class, mask_of


class ConstructionError(DigraphError):
    pass


# -- closed forms -----------------------------------------------------------


def m_value(n: int, k: int) -> int:
    """Least arc count forcing a cycle of length <= k in a strong n-vertex digraph."""
    if k < 2 or n < k + 1:
        raise ValueError(f"need k >= 2 and n >= k + 1, got n={n}, k={k}")
    num = n * n + (3 - 2 * k) * n + k * k - k
    return num // 2


def phi11_value(n: int, k: int) -> int:
    return m_value(n, k) - 1


def phi321_value(n: int) -> int:
    """Maximum arc count of a C_{<=3}-free strong digraph with min out-degree 2."""
    if n < 1:
        raise ValueError("n must be positive")
    if n <= 6:
        return 0
    if n <= 8:
        return comb(n - 1, 2) - 1
    return comb(n - 1, 2) - 2


# -- small explicit digraphs ------------------------------------------------


def circulant(n: int, jumps: Iterable[int]) -> Digraph:
    s = sorted(set(jumps))
    if n < 2:
        raise ConstructionError("circulant needs n >= 2")
    if not s or s[0] < 1 or s[-1] > n - 1:
        raise ConstructionError(f"jumps must be a nonempty subset of 1..{n - 1}")
    return Digraph.from_arcs(n, [(i, (i + j) % n) for i in range(n) for j in s])


def f8() -> Digraph:
    arcs = []
    for i in range(4):
        a, b = 2 * i, 2 * i + 1
        arcs += [(a, b), (a, a + 2), (a, a + 3), (b, b + 1), (b, b + 2)]
    return Digraph.from_arcs(8, [(u % 8, v % 8) for u, v in arcs])


def directed_cycle(n: int) -> Digraph:
    return circulant(n, [1])


def strong_tournament(n: int) -> Digraph:
    """Transitive tournament with the arc between the end vertices reversed."""
    if n < 3:
        raise ConstructionError("no strong tournament on fewer than 3 vertices")
    arcs = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) != (0, n - 1)]
    return Digraph.from_arcs(n, arcs + [(n - 1, 0)])


# -- the five extremal families of C_{<=3}-free strong digraphs -------------

FAMILIES = ("D1", "D2", "D3", "D4", "D5")


@dataclass(frozen=True)
class Phi31FamilyParams:
    """Recipe for one extremal member of the ``(n, 3, 1, 1)`` class.

    ``orders`` are the orders of the strong components ``D_1..D_h`` of
    ``D - v`` in acyclic order. ``middle`` tags each middle singleton as an
    in-neighbour (``y``), out-neighbour (``x``) or non-neighbour (``z``) of
    the hub; all ``y`` precede all ``x``. ``first`` / ``last`` give the recipe
    for an end component of order >= 5; order 4 is always the 4-cycle.
    ``first_anchor`` picks the out-degree-one vertex of ``D_1`` the hub points
    to, ``last_anchor`` the in-degree-one vertex of ``D_h`` pointing to the
    hub (indices local to that component; default: smallest eligible).
    """

    family: str
    orders: tuple[int, ...]
    middle: str | None = None
    first: Phi31FamilyParams | None = None
    last: Phi31FamilyParams | None = None
    first_anchor: int | None = None
    last_anchor: int | None = None
    mid: str = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "orders", tuple(self.orders))
        nmid = max(len(self.orders) - 2, 0)
        mid = self.middle if self.middle is not None else "z" * nmid
        object.__setattr__(self, "mid", mid.lower())
        self.validate()

    @property
    def n(self) -> int:
        return sum(self.orders) + 1

    @property
    def h(self) -> int:
        return len(self.orders)

    def validate(self) -> None:
        fam, o = self.family, self.orders
        if fam not in FAMILIES:
            raise ConstructionError(f"unknown family {fam!r}")
        if any(x < 1 for x in o):
            raise ConstructionError("component orders must be positive")
        if fam == "D1":
            if len(o) != 2 or o[0] < 4 or o[1] < 4:
                raise ConstructionError("D1 needs exactly two components, both of order >= 4")
        else:
            if len(o) < 3:
                raise ConstructionError(f"{fam} needs at least three components")
            if any(x != 1 for x in o[1:-1]):
                raise ConstructionError(f"{fam} needs singleton middle components")
            want = {"D2": (True, True), "D3": (True, False), "D4": (False, True), "D5": (False, False)}[fam]
            got = (o[0] >= 4, o[-1] >= 4)
            if got != want or any(x in (2, 3) for x in (o[0], o[-1])):
                raise ConstructionError(f"{fam} end orders {o[0]}, {o[-1]} do not match the family")
        mid = self.mid
        if len(mid) != max(len(o) - 2, 0) or set(mid) - set("xyz"):
            raise ConstructionError("middle must tag every middle singleton with x, y or z")
        if "x" in mid and "y" in mid and mid.rindex("y") > mid.index("x"):
            raise ConstructionError("every y must precede every x in the middle sequence")
        if o[0] == 1 and "y" in mid and "z" not in mid[: mid.index("y")]:
            raise ConstructionError("with a singleton D_1 a z must precede the first y (strongness)")
        if o[-1] == 1 and "x" in mid and "z" not in mid[mid.rindex("x") + 1 :]:
            raise ConstructionError("with a singleton D_h a z must follow the last x (strongness)")
        if (o[0] >= 4) + (o[-1] >= 4) + mid.count("z") < 2:
            raise ConstructionError("the hub must have degree <= n - 3 (needs two non-neighbours)")
        for sub, order in ((self.first, o[0]), (self.last, o[-1])):
            if sub is not None and sub.n != order:
                raise ConstructionError(f"sub-recipe has order {sub.n}, component has order {order}")
            if sub is not None and order < 5:
                raise ConstructionError("sub-recipes only apply to components of order >= 5")

    def to_compact(self) -> str:
        s = f"family={self.family} orders={','.join(map(str, self.orders))}"
        if self.mid:
            s += f" middle={self.mid}"
        return s


def default_params(order: int) -> Phi31FamilyParams:
    """Smallest-parameter D5 member of the given order (>= 5)."""
    return Phi31FamilyParams("D5", (1,) * (order - 1))


def parse_phi31_params(text: str) -> Phi31FamilyParams:
    """Parse ``family=D2 orders=4,1,1,5 [middle=zy]``."""
    fields = {}
    for tok in text.replace(";", " ").split():
        key, sep, val = tok.partition("=")
        if not sep:
            raise ConstructionError(f"bad token {tok!r}; expected key=value")
        fields[key.strip().lower()] = val.strip()
    if "family" not in fields or "orders" not in fields:
        raise ConstructionError("need family=... and orders=...")
    try:
        orders = tuple(int(x) for x in fields["orders"].split(","))
    except ValueError:
        raise ConstructionError(f"bad orders {fields['orders']!r}") from None
    return Phi31FamilyParams(fields["family"].upper(), orders, fields.get("middle"))


def _component(order: int, sub: Phi31FamilyParams | None) -> Digraph:
    if order == 1:
        return Digraph(1, (0,))
    if order == 4:
        return directed_cycle(4)
    return build_phi31(sub or default_params(order))


def build_phi31(params: Phi31FamilyParams, verify: bool = True) -> Digraph:
    """Assemble the member of ``Phi_n^3(1,1)`` described by ``params``.

    Vertex 0 is the hub; the components follow in acyclic order.
    """
    o = params.orders
    h = len(o)
    n = params.n
    start = [1]
    for x in o:
        start.append(start[-1] + x)
    block = [mask_of(range(start[i], start[i + 1])) for i in range(h)]
    out = [0] * n

    def put(u: int, v: int) -> None:
        out[u] |= 1 << v

    hub = 0
    # end components with their hub attachment
    first = _component(o[0], params.first)
    last = _component(o[-1], params.last) if h > 1 else None
    for comp, s in ((first, start[0]), (last, start[h - 1])):
        for u in range(comp.n):
            for v in bits(comp.out[u]):
                put(s + u, s + v)

    s1 = start[0]
    if o[0] == 1:
        x_star = s1
        put(hub, x_star)
    else:
        cands = [u for u in range(first.n) if first.out_degree(u) == 1]
        a = params.first_anchor if params.first_anchor is not None else cands[0]
        if a not in cands:
            raise ConstructionError(f"first_anchor {a} is not an out-degree-one vertex of D_1")
        succ = next(bits(first.out[a]))
        x_star = s1 + a
        put(hub, x_star)
        for u in range(first.n):
            if u not in (a, succ):
                put(s1 + u, hub)

    sh = start[h - 1]
    if o[-1] == 1:
        y_star = sh
        put(y_star, hub)
    else:
        assert last is not None
        cands = [u for u in range(last.n) if last.in_degree(u) == 1]
        b = params.last_anchor if params.last_anchor is not None else cands[0]
        if b not in cands:
            raise ConstructionError(f"last_anchor {b} is not an in-degree-one vertex of D_h")
        pred = next(bits(last.inn[b]))
        y_star = sh + b
        put(y_star, hub)
        for u in range(last.n):
            if u not in (b, pred):
                put(hub, sh + u)

    mids = [start[i] for i in range(1, h - 1)]
    xs = {m for m, t in zip(mids, params.mid) if t == "x"}
    ys = {m for m, t in zip(mids, params.mid) if t == "y"}
    for m in xs:
        put(hub, m)
    for m in ys:
        put(m, hub)

    # every forward arc between components, then strip the three exception types
    for i in range(h):
        later = 0
        for j in range(i + 1, h):
            later |= block[j]
        for u in bits(block[i]):
            out[u] |= later
    out[x_star] &= ~(1 << y_star)
    for r in ys:
        out[x_star] &= ~(1 << r)
    for s in xs:
        out[s] &= ~(1 << y_star)

    d = Digraph(n, tuple(out))
    if verify:
        verify_phi31(d, params)
    return d


def verify_phi31(d: Digraph, params: Phi31FamilyParams) -> None:
    n = d.n
    if not in_class(d, ClassSpec(n, 3, 1, 1)):
        raise ConstructionError(f"{params.to_compact()} is not a C_<=3-free strong digraph")
    if d.arc_count != comb(n - 1, 2) + 1:
        raise ConstructionError(f"{params.to_compact()} has {d.arc_count} arcs, want {comb(n - 1, 2) + 1}")
    o = params.orders
    hub_out, hub_in = d.out[0], d.inn[0]
    first = mask_of(range(1, 1 + o[0]))
    last = mask_of(range(n - o[-1], n))
    if o[0] >= 4 and ((hub_out & first).bit_count(), (hub_in & first).bit_count()) != (1, o[0] - 2):
        raise ConstructionError("hub degrees into D_1 are wrong")
    if o[-1] >= 4 and ((hub_out & last).bit_count(), (hub_in & last).bit_count()) != (o[-1] - 2, 1):
        raise ConstructionError("hub degrees into D_h are wrong")


def enumerate_phi31_params(n: int, recurse: bool = True) -> list[Phi31FamilyParams]:
    """Every recipe of order ``n``: all component orders, middle words, anchor
    choices and (when ``recurse``) sub-recipes for end components."""
    out: list[Phi31FamilyParams] = []

    def ends(order: int, is_first: bool) -> list[tuple[Phi31FamilyParams | None, int | None]]:
        if order == 1:
            return [(None, None)]
        subs = enumerate_phi31_params(order, recurse) if order >= 5 and recurse else [None]
        res = []
        for sub in subs:
            comp = _component(order, sub)
            if is_first:
                anchors = [u for u in range(comp.n) if comp.out_degree(u) == 1]
            else:
                anchors = [u for u in range(comp.n) if comp.in_degree(u) == 1]
            res.extend((sub, a) for a in anchors)
        return res

    def middles(m: int, first1: bool, last1: bool) -> list[str]:
        keep = []
        for ny in range(m + 1):
            for nx in range(m - ny + 1):
                for w in _words(m, ny, nx):
                    if first1 and "y" in w and "z" not in w[: w.index("y")]:
                        continue
                    if last1 and "x" in w and "z" not in w[w.rindex("x") + 1 :]:
                        continue
                    if (not first1) + (not last1) + w.count("z") < 2:
                        continue
                    keep.append(w)
        return sorted(set(keep))

    shapes: list[tuple[str, tuple[int, ...], list[str]]] = []
    for a in range(4, n - 4):
        if n - 1 - a >= 4:
            shapes.append(("D1", (a, n - 1 - a), [""]))
    end_orders = [1] + list(range(4, n))
    for a in end_orders:
        for b in end_orders:
            m = n - 1 - a - b
            if m < 1:
                continue
            fam = {(True, True): "D2", (True, False): "D3", (False, True): "D4", (False, False): "D5"}[(a >= 4, b >= 4)]
            shapes.append((fam, (a,) + (1,) * m + (b,), middles(m, a == 1, b == 1)))
    for fam, orders, words in shapes:
        for w in words:
            for fs, fa in ends(orders[0], True):
                for ls, la in ends(orders[-1], False):
                    out.append(Phi31FamilyParams(fam, orders, w or None, fs, ls, fa, la))
    return out


def _words(m: int, ny: int, nx: int) -> list[str]:
    res = []

    def rec(prefix: str, ny: int, nx: int, seen_x: bool) -> None:
        if len(prefix) == m:
            if ny == 0 and nx == 0:
                res.append(prefix)
            return
        rest = m - len(prefix)
        if ny + nx < rest:
            rec(prefix + "z", ny, nx, seen_x)
        if ny and not seen_x:
            rec(prefix + "y", ny - 1, nx, seen_x)
        if nx:
            rec(prefix + "x", ny, nx - 1, True)

    rec("", ny, nx, False)
    return res
