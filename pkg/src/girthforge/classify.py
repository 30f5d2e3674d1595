"""Structural validators for extremal C_{<=3}-free strong digraphs.

``classify_phi31`` sorts a member of ``Phi_n^3(1,1)`` into one of the five
families D1..D5 by deleting a low-degree hub vertex and checking the
component structure clause by clause. Violations carry the clause label
(``I(2)``, ``II(2)``, ``III(2.3)``, ...) so a failure points straight at the
statement that broke.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .core import ClassSpec, Digraph, DigraphError, bits, degrees, in_class, induced, mask_of, remove_vertex, strong_components
from .construct import phi321_value
from .search import InvariantViolation


class PreconditionError(DigraphError):
    pass


@dataclass
class Phi31Classification:
    hub: int
    family: str | None = None
    components: list[list[int]] = field(default_factory=list)  # original labels, acyclic order
    x_set: list[int] = field(default_factory=list)  # hub out-neighbours among middle singletons
    y_set: list[int] = field(default_factory=list)  # hub in-neighbours among middle singletons
    x_star: list[int] = field(default_factory=list)  # hub out-neighbours in D_1
    y_star: list[int] = field(default_factory=list)  # hub in-neighbours in D_h
    violations: list[str] = field(default_factory=list)
    gamma_parts: dict[str, int] = field(default_factory=dict)
    hub_tags: dict[int, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.family is not None and not self.violations

    @property
    def orders(self) -> list[int]:
        return [len(c) for c in self.components]

    @property
    def consistent(self) -> bool:
        """All accepted hubs agree on the family."""
        return len(set(self.hub_tags.values())) <= 1

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "hub": self.hub,
            "orders": self.orders,
            "components": self.components,
            "x": self.x_set,
            "y": self.y_set,
            "violations": self.violations,
            "hub_tags": {str(k): v for k, v in sorted(self.hub_tags.items())},
        }


def _require_phi31(d: Digraph) -> None:
    n = d.n
    if n < 5:
        raise PreconditionError("the family decomposition needs n >= 5")
    if not in_class(d, ClassSpec(n, 3, 1, 1)):
        raise PreconditionError("digraph is not a C_<=3-free strong digraph")
    if d.arc_count != comb(n - 1, 2) + 1:
        raise PreconditionError(f"digraph has {d.arc_count} arcs; extremal members have {comb(n - 1, 2) + 1}")


def _is_phi31(d: Digraph) -> bool:
    if d.n == 4:
        return in_class(d, ClassSpec(4, 3, 1, 1)) and d.arc_count == 4
    return d.n >= 5 and in_class(d, ClassSpec(d.n, 3, 1, 1)) and d.arc_count == comb(d.n - 1, 2) + 1


def _with_hub(d: Digraph, v: int, depth: int) -> Phi31Classification:
    n = d.n
    res = Phi31Classification(hub=v)
    bad = res.violations.append
    rest, orig = remove_vertex(d, v)
    dec = strong_components(rest)
    comps = [[orig[u] for u in bits(c)] for c in dec.components]
    res.components = comps
    h = len(comps)
    o = [len(c) for c in comps]
    if h < 2:
        bad("I: D - v is strong")
        return res

    # clause I: component shape
    if h == 2:
        if o[0] >= 4 and o[1] >= 4:
            res.family = "D1"
        else:
            bad(f"I(1): two components of orders {o[0]}, {o[1]}")
    else:
        if any(x != 1 for x in o[1:-1]):
            bad("I(2): a middle component is not a singleton")
        for x, label in ((o[0], "n_1"), (o[-1], "n_h")):
            if x in (2, 3):
                bad(f"I(2): {label} = {x}")
        if not res.violations:
            res.family = {(True, True): "D2", (True, False): "D3", (False, True): "D4", (False, False): "D5"}[
                (o[0] >= 4, o[-1] >= 4)
            ]
    if res.violations:
        return res

    out_v, in_v = d.out[v], d.inn[v]
    first, last = mask_of(comps[0]), mask_of(comps[-1])
    middle = [c[0] for c in comps[1:-1]]
    mid_mask = mask_of(middle)

    # clause II: end components
    for idx, mask, size in ((0, first, o[0]), (h - 1, last, o[-1])):
        if size == 1:
            u = comps[idx][0]
            if idx == 0 and not out_v >> u & 1:
                bad("II(1): hub does not dominate the D_1 singleton")
            if idx == h - 1 and not in_v >> u & 1:
                bad("II(1): the D_h singleton does not dominate the hub")
            continue
        sub, _ = induced(d, comps[idx])
        if not _is_phi31(sub):
            bad(f"II(2): D_{idx + 1} is not extremal")
        elif sub.n >= 5 and depth < n:
            inner = classify_phi31(sub, _depth=depth + 1)
            if not inner.ok:
                bad(f"II(2): D_{idx + 1} does not classify ({'; '.join(inner.violations)})")
        tilde, _ = induced(d, comps[idx] + [v])
        if not _is_phi31(tilde):
            bad(f"II(2): D~_{idx + 1} is not extremal")
        dp, dm = (out_v & mask).bit_count(), (in_v & mask).bit_count()
        want = (1, size - 2) if idx == 0 else (size - 2, 1)
        if (dp, dm) != want:
            bad(f"II(2): hub has (out, in) = ({dp}, {dm}) into D_{idx + 1}, want {want}")

    # clause III: hub neighbourhood and forward arcs
    xs = out_v & mid_mask
    ys = in_v & mid_mask
    res.x_set, res.y_set = list(bits(xs)), list(bits(ys))
    pos = {u: i for i, u in enumerate(middle)}
    if xs and ys and max(pos[u] for u in bits(ys)) > min(pos[u] for u in bits(xs)):
        bad("III(1): an in-neighbour of the hub follows an out-neighbour")
    x_star = out_v & first
    y_star = in_v & last
    res.x_star, res.y_star = list(bits(x_star)), list(bits(y_star))
    exceptions: dict[tuple[int, int], str] = {}
    for a in bits(x_star):
        for b in bits(y_star):
            exceptions[(a, b)] = "III(2.1)"
        for r in bits(ys):
            exceptions[(a, r)] = "III(2.2)"
    for s in bits(xs):
        for b in bits(y_star):
            exceptions[(s, b)] = "III(2.3)"
    for i in range(h):
        for j in range(i + 1, h):
            for a in comps[i]:
                for b in comps[j]:
                    present = d.has_arc(a, b)
                    rule = exceptions.get((a, b))
                    if rule and present:
                        bad(f"{rule}: excluded arc ({a}, {b}) is present")
                    elif not rule and not present:
                        bad(f"III(2): forward arc ({a}, {b}) is missing")

    # gamma bookkeeping
    def nonadj(us, ws) -> int:
        return sum(1 for a in us for b in ws if a != b and not d.adjacent(a, b))

    def inside(us) -> int:
        return sum(1 for i, a in enumerate(us) for b in us[i + 1 :] if not d.adjacent(a, b))

    res.gamma_parts = {
        "exceptions": len(exceptions),
        "end_structures": inside(comps[0] + [v]) + (inside(comps[-1] + [v]) if h > 1 else 0),
        "hub_middle": nonadj([v], middle),
    }
    total = sum(res.gamma_parts.values())
    if total != n - 2:
        bad(f"gamma accounting: {total} nonadjacent pairs explained, want {n - 2}")
    return res


def classify_phi31(d: Digraph, hub: int | None = None, *, _depth: int = 0) -> Phi31Classification:
    """Family tag and witnesses for an extremal digraph of the (n, 3, 1, 1) class.

    Hubs with ``d(v) <= n - 3`` are tried in ascending (degree, index) order;
    the first one whose deletion satisfies every clause is reported, and the
    tags produced by all admissible hubs are collected in ``hub_tags``. The tag
    can depend on the hub; pass ``hub`` to classify relative to a fixed one.
    """
    _require_phi31(d)
    prof = degrees(d)
    hubs = sorted((u for u in d.vertices if prof.deg[u] <= d.n - 3), key=lambda u: (prof.deg[u], u))
    if hub is not None:
        if hub not in hubs:
            raise PreconditionError(f"vertex {hub} has degree {prof.deg[hub]} > n - 3")
        hubs = [hub]
    if not hubs:
        raise InvariantViolation("no vertex of degree <= n - 3 in an extremal digraph")
    chosen: Phi31Classification | None = None
    first_fail: Phi31Classification | None = None
    tags: dict[int, str] = {}
    for v in hubs:
        res = _with_hub(d, v, _depth)
        if res.ok:
            assert res.family is not None
            tags[v] = res.family
            if chosen is None:
                chosen = res
            if _depth:
                break
        elif first_fail is None:
            first_fail = res
    final = chosen or first_fail
    assert final is not None
    final.hub_tags = tags
    return final


def check_prop22(d: Digraph, cls: Phi31Classification | None = None) -> tuple[int, int]:
    """Two distinct out-degree-one vertices, placed where the classification says."""
    _require_phi31(d)
    ones = [u for u in d.vertices if d.out_degree(u) == 1]
    if len(ones) < 2:
        raise InvariantViolation(f"only {len(ones)} vertices of out-degree one")
    cls = cls or classify_phi31(d)
    if not cls.ok:
        raise InvariantViolation(f"digraph does not classify: {cls.violations}")
    v = cls.hub
    last = cls.components[-1]
    if len(last) >= 4:
        y = cls.y_star[0]
        cands = [u for u in last if u != y and d.out_degree(u) == 1]
        if len(cands) < 2:
            raise InvariantViolation("clause (1): fewer than two out-degree-one vertices in D_h - y")
        return cands[0], cands[1]
    y = last[0]
    p = cls.components[-2][0] if len(cls.components[-2]) == 1 else None
    if p is None:
        raise InvariantViolation("clause (2): D_{h-1} is not a singleton")
    pair = (v, y) if d.has_arc(p, v) else (p, y)
    if any(d.out_degree(u) != 1 for u in pair):
        raise InvariantViolation(f"clause (2): vertices {pair} do not both have out-degree one")
    return pair


def check_lemma26(d: Digraph) -> bool:
    """Minimum degree of an extremal (n, 3, 2, 1) digraph is at most n - 3."""
    n = d.n
    if n < 7 or not in_class(d, ClassSpec(n, 3, 2, 1)) or d.arc_count != phi321_value(n):
        raise PreconditionError("need an extremal member of the (n, 3, 2, 1) class with n >= 7")
    return degrees(d).min_deg <= n - 3
