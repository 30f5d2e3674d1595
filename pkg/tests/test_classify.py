import json
from functools import lru_cache

import pytest

from girthforge.classify import PreconditionError, _with_hub, check_lemma26, check_prop22, classify_phi31
from girthforge.construct import Phi31FamilyParams, build_phi31, circulant, directed_cycle, enumerate_phi31_params, f8, strong_tournament
from girthforge.core import ClassSpec, Digraph, degrees, gamma
from girthforge.search import SearchParams, solve


@lru_cache(maxsize=None)
def extremals(n, xi=1):
    return tuple(solve(SearchParams(ClassSpec(n, 3, xi, 1))).extremal)


def test_smallest_d5():
    d = build_phi31(Phi31FamilyParams("D5", (1, 1, 1, 1)))
    cls = classify_phi31(d)
    assert cls.ok and cls.family == "D5"
    assert cls.orders[1:-1] == [1, 1]
    a, b = check_prop22(d, cls)
    assert a != b and d.out_degree(a) == d.out_degree(b) == 1


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_every_solver_extremal_classifies(n):
    for d in extremals(n):
        cls = classify_phi31(d)
        assert cls.ok, cls.violations
        assert cls.family in {"D1", "D2", "D3", "D4", "D5"}
        assert sum(cls.gamma_parts.values()) == n - 2 == gamma(d)
        assert cls.hub in cls.hub_tags
        a, b = check_prop22(d, cls)
        assert a != b


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_recipe_roundtrip_on_builder_hub(n):
    for p in enumerate_phi31_params(n):
        cls = classify_phi31(build_phi31(p), hub=0)
        assert cls.ok and cls.family == p.family
        assert cls.orders == list(p.orders)


def test_larger_families_appear_at_n10():
    fams = {classify_phi31(build_phi31(p), hub=0).family for p in enumerate_phi31_params(10, recurse=False)}
    assert fams == {"D1", "D2", "D3", "D4", "D5"}


def test_hub_dependence_is_recorded():
    # some n = 7 extremal digraphs get different tags from different admissible hubs
    mixed = [classify_phi31(d) for d in extremals(7) if not classify_phi31(d).consistent]
    assert mixed
    for cls in mixed:
        assert len(set(cls.hub_tags.values())) > 1
        assert cls.family == cls.hub_tags[cls.hub]


def test_preconditions(c4):
    with pytest.raises(PreconditionError):
        classify_phi31(strong_tournament(5))
    with pytest.raises(PreconditionError):
        check_prop22(c4)
    d = build_phi31(Phi31FamilyParams("D5", (1, 1, 1, 1)))
    weaker = Digraph.from_arcs(5, d.arcs()[1:])
    with pytest.raises(PreconditionError):
        classify_phi31(weaker)
    big = max(d.vertices, key=d.degree)
    with pytest.raises(PreconditionError):
        classify_phi31(d, hub=big)


def test_violations_name_clauses():
    labels = set()
    for n in (6, 7):
        for d in extremals(n):
            prof = degrees(d)
            for v in d.vertices:
                if prof.deg[v] > n - 3:
                    labels |= {x.split(":")[0] for x in _with_hub(d, v, 0).violations}
    assert labels and labels <= {"I", "I(1)", "I(2)", "II(1)", "II(2)", "III(1)", "III(2)", "III(2.1)", "III(2.2)", "III(2.3)"}


def test_json_shape():
    cls = classify_phi31(extremals(6)[0])
    payload = json.loads(json.dumps(cls.to_json()))
    assert set(payload) == {"family", "hub", "orders", "components", "x", "y", "violations", "hub_tags"}
    assert payload["violations"] == []


def test_min_degree_bound_examples():
    assert check_lemma26(circulant(7, [1, 2]))
    assert check_lemma26(f8())
    assert degrees(f8()).min_deg == 5
    with pytest.raises(PreconditionError):
        check_lemma26(directed_cycle(7))


@pytest.mark.slow
def test_min_degree_bound_on_n9_extremals():
    ds = extremals(9, xi=2)
    assert ds and all(check_lemma26(d) for d in ds)
