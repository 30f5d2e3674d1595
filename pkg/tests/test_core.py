import itertools
import random
from math import comb

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from girthforge.construct import circulant, f8, strong_tournament
from girthforge.core import (
    ClassSpec,
    Digraph,
    DigraphError,
    degrees,
    gamma,
    gamma_between,
    girth,
    in_class,
    induced,
    is_c_le_k_free,
    is_strong,
    mask_of,
    membership_failures,
    parse_arclist,
    remove_vertex,
    strong_components,
    to_arclist,
)
from girthforge.verify import oracle_gamma, oracle_girth, oracle_strong, random_digraph

from conftest import digraphs


def cycle_girth_by_enumeration(d):
    g = nx.DiGraph()
    g.add_nodes_from(range(d.n))
    g.add_edges_from(d.arcs())
    return min((len(c) for c in nx.simple_cycles(g)), default=None)


def to_nx(d):
    g = nx.DiGraph()
    g.add_nodes_from(range(d.n))
    g.add_edges_from(d.arcs())
    return g


# -- basic structure --------------------------------------------------------


def test_from_arcs_rejects_loops_and_range():
    with pytest.raises(DigraphError):
        Digraph.from_arcs(3, [(1, 1)])
    with pytest.raises(DigraphError):
        Digraph.from_arcs(3, [(0, 3)])


def test_degrees_and_adjacency(c4):
    assert c4.arc_count == 4
    assert all(c4.out_degree(v) == 1 and c4.in_degree(v) == 1 for v in c4.vertices)
    assert c4.adjacent(1, 0) and not c4.adjacent(0, 2)
    prof = degrees(c4)
    assert (prof.min_out, prof.min_in, prof.min_deg) == (1, 1, 2)
    assert prof.vertices_of_type(1, 1) == [0, 1, 2, 3]


def test_relabel_and_reverse_roundtrip(c4):
    perm = [2, 0, 3, 1]
    r = c4.relabel(perm)
    assert all(r.has_arc(perm[u], perm[v]) for u, v in c4.arcs())
    assert c4.reverse().reverse() == c4
    assert c4.reverse().has_arc(1, 0)


# -- girth ------------------------------------------------------------------


def test_girth_examples(c4):
    assert girth(c4) == 4
    assert girth(circulant(7, [1, 2])) == 4
    assert girth(f8()) == 4
    assert girth(Digraph(1, (0,))) is None
    assert girth(Digraph.from_arcs(2, [(0, 1), (1, 0)])) == 2


@given(digraphs(max_n=7))
def test_girth_matches_cycle_enumeration(d):
    assert girth(d) == cycle_girth_by_enumeration(d)


def test_girth_matches_matrix_oracle_on_random_sample():
    rng = random.Random(7)
    for _ in range(200):
        d = random_digraph(rng, rng.randint(1, 9), rng.choice((0.1, 0.25, 0.5)))
        assert girth(d) == oracle_girth(d)


def test_c_le_k_free():
    assert is_c_le_k_free(circulant(7, [1, 2]), 3)
    assert not is_c_le_k_free(circulant(7, [1, 2]), 4)
    assert is_c_le_k_free(f8(), 3)
    assert not is_c_le_k_free(Digraph.from_arcs(3, [(0, 1), (1, 0), (1, 2)]), 2)


# -- strong components ------------------------------------------------------


def test_strong_examples(c4):
    assert is_strong(circulant(7, [1, 2]))
    assert is_strong(f8())
    assert not is_strong(Digraph.from_arcs(4, [(0, 1), (1, 2), (2, 3)]))
    assert strong_components(strong_tournament(5)).h == 1


def test_two_cycles_joined_by_one_arc():
    arcs = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (6, 1)]
    dec = strong_components(Digraph.from_arcs(8, arcs))
    assert dec.h == 2
    assert dec.vertex_sets() == [[4, 5, 6, 7], [0, 1, 2, 3]]


def test_f8_minus_vertex_matches_reachability_oracle():
    d, _ = remove_vertex(f8(), 0)
    dec = strong_components(d)
    comps = {frozenset(c) for c in nx.strongly_connected_components(to_nx(d))}
    assert {frozenset(c) for c in dec.vertex_sets()} == comps
    assert sorted(dec.orders) == sorted(len(c) for c in comps)


@given(digraphs(max_n=8))
def test_components_partition_and_acyclic_order(d):
    dec = strong_components(d)
    assert {frozenset(c) for c in dec.vertex_sets()} == {frozenset(c) for c in nx.strongly_connected_components(to_nx(d))}
    for u, v in d.arcs():
        assert dec.comp_of[u] <= dec.comp_of[v]
    assert is_strong(d) == oracle_strong(d) == (dec.h == 1)


# -- gamma ------------------------------------------------------------------


def test_gamma_examples():
    full = Digraph.from_arcs(5, [(u, v) for u in range(5) for v in range(5) if u != v])
    assert gamma(full) == 0
    assert gamma(circulant(7, [1, 2])) == 7
    assert gamma(f8()) == 8


@given(digraphs(max_n=8))
def test_gamma_matches_pair_scan(d):
    assert gamma(d) == oracle_gamma(d)


@given(digraphs(max_n=8, oriented=True))
def test_arcs_plus_gamma_is_binomial_when_oriented(d):
    assert d.arc_count + gamma(d) == comb(d.n, 2)


def test_gamma_between_examples():
    d = Digraph.from_arcs(4, [(u, v) for u in (0, 1) for v in (2, 3)])
    assert gamma_between(d, [0, 1], [2, 3]) == 0
    w = 0
    rest = [1, 2, 3]
    assert gamma_between(d, [w], rest) == 3 - d.degree(w)
    with pytest.raises(DigraphError):
        gamma_between(d, [0, 1], [1, 2])


@given(digraphs(min_n=2, max_n=8), st.randoms(use_true_random=False))
def test_gamma_between_matches_scan(d, rnd):
    vs = list(d.vertices)
    rnd.shuffle(vs)
    cut = rnd.randint(0, d.n)
    p, q = vs[:cut], vs[cut:]
    want = sum(1 for a in p for b in q if not d.has_arc(a, b) and not d.has_arc(b, a))
    assert gamma_between(d, p, q) == want


# -- induced subdigraphs ----------------------------------------------------


def test_induced_whole_is_identity(c4):
    sub, orig = induced(c4, range(4))
    assert sub == c4 and orig == [0, 1, 2, 3]


def test_f8_first_four():
    sub, orig = induced(f8(), [0, 1, 2, 3])
    assert orig == [0, 1, 2, 3]
    for a in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]:
        assert sub.has_arc(*a)


def test_induced_rejects_empty(c4):
    with pytest.raises(DigraphError):
        induced(c4, [])


@given(digraphs(min_n=1, max_n=8), st.randoms(use_true_random=False))
def test_induced_matches_filter(d, rnd):
    w = sorted(rnd.sample(range(d.n), rnd.randint(1, d.n)))
    sub, orig = induced(d, w)
    assert orig == w
    want = {(orig.index(u), orig.index(v)) for u, v in d.arcs() if u in w and v in w}
    assert set(sub.arcs()) == want


# -- membership -------------------------------------------------------------


def test_membership_examples(c4):
    assert in_class(circulant(7, [1, 2]), ClassSpec(7, 3, 2, 1))
    assert in_class(f8(), ClassSpec(8, 3, 2, 1))
    assert membership_failures(c4, ClassSpec(4, 3, 2, 1)) == ["δ⁺ = 1"]
    two = Digraph.from_arcs(3, [(0, 1), (1, 0), (1, 2), (2, 0)])
    assert "girth 2" in membership_failures(two, ClassSpec(3, 2, 1, 1))
    with pytest.raises(DigraphError):
        membership_failures(c4, ClassSpec(5, 3, 1, 1))


@pytest.mark.parametrize("args", [(0, 3, 1, 1), (4, 1, 1, 1), (4, 3, -1, 1)])
def test_classspec_validation(args):
    with pytest.raises(ValueError):
        ClassSpec(*args)


# -- arclist ----------------------------------------------------------------


def test_arclist_format(c4):
    assert to_arclist(c4) == "4\n0 1\n1 2\n2 3\n3 0\n"


@given(digraphs(max_n=10))
def test_arclist_roundtrip(d):
    assert parse_arclist(to_arclist(d)) == d


@pytest.mark.parametrize(
    "text",
    ["", "x\n", "3\n0 1\n0 1\n", "3\n1 1\n", "3\n0 5\n", "3\n0\n", "3\na b\n", "0\n"],
)
def test_arclist_rejects_malformed(text):
    with pytest.raises(DigraphError):
        parse_arclist(text)


def test_mask_of_roundtrip():
    assert mask_of([0, 3, 5]) == 0b101001
    assert list(itertools.compress(range(6), [(0b101001 >> i) & 1 for i in range(6)])) == [0, 3, 5]
