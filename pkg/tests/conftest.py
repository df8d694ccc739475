from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import strategies as st

from rankmatch.graph import Graph, Matching, Permutation

# G4 gadget ids: v2=0, v1=1, u1=2, u2=3.
V2, V1, U1, U2 = 0, 1, 2, 3


@pytest.fixture
def g4() -> tuple[Graph, Matching]:
    return Graph.from_edges(4, [(V2, V1), (V1, U1), (U1, U2)]), Matching.from_edges([(V2, V1), (U1, U2)])


@pytest.fixture
def p4() -> Graph:
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 10) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, mask) if keep])


@st.composite
def graphs_with_permutation(draw, max_n: int = 10) -> tuple[Graph, Permutation]:
    g = draw(graphs(max_n=max_n))
    order = draw(st.permutations(range(g.n)))
    return g, Permutation.from_order(order)


# Acceptance verdicts, filled in by test_acceptance and echoed after the run.
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter) -> None:
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
