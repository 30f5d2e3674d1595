import sys
import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from girthforge.core import Digraph

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def digraphs(draw, min_n=1, max_n=8, oriented=False):
    n = draw(st.integers(min_n, max_n))
    arcs = []
    for u, v in itertools.combinations(range(n), 2):
        state = draw(st.integers(0, 2 if oriented else 3))
        if state in (1, 3):
            arcs.append((u, v))
        if state in (2, 3):
            arcs.append((v, u))
    return Digraph.from_arcs(n, arcs)


@st.composite
def permutations_of(draw, n):
    return draw(st.permutations(list(range(n))))


@pytest.fixture
def c4():
    return Digraph.from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    rows = getattr(mod, "ROWS", None)
    if rows:
        terminalreporter.section("acceptance criteria")
        for row in sorted(rows, key=lambda r: r.criterion):
            terminalreporter.write_line(row.line())
