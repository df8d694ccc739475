import random

import pytest
from hypothesis import given, settings

from rankmatch.blossom import CapExceededError, brute_force_maximum, has_perfect_matching, maximum_matching
from rankmatch.graph import Graph, validate_matching

from .conftest import graphs, random_graph


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def test_single_edge():
    m = maximum_matching(Graph.from_edges(2, [(0, 1)]))
    assert m.edges == {(0, 1)}


def test_odd_cycle():
    assert len(maximum_matching(cycle(5))) == 2


def test_blossom_needed():
    # Triangle with pendant paths: greedy start on the triangle forces blossom contraction.
    g = Graph.from_edges(8, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (4, 5), (2, 6), (6, 7)])
    assert len(maximum_matching(g)) == 4 == len(brute_force_maximum(g))


def test_brute_force_small():
    assert len(brute_force_maximum(Graph.from_edges(0, []))) == 0
    assert len(brute_force_maximum(complete(4))) == 2
    p4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert brute_force_maximum(p4).edges == {(0, 1), (2, 3)}


def test_brute_force_cap():
    with pytest.raises(CapExceededError):
        brute_force_maximum(Graph.from_edges(17, []))
    assert len(brute_force_maximum(Graph.from_edges(17, []), cap=17)) == 0


def test_has_perfect_matching(p4):
    assert has_perfect_matching(p4)
    assert not has_perfect_matching(Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)]))
    assert has_perfect_matching(cycle(6))
    assert not has_perfect_matching(cycle(5))


@given(graphs(max_n=12))
@settings(max_examples=200)
def test_matches_brute_force(g):
    m = maximum_matching(g)
    check = validate_matching(g, m)
    assert check.valid and check.maximal
    assert len(m) == len(brute_force_maximum(g))


def test_relabel_invariance():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(2, 14)
        g = random_graph(n, rng.uniform(0.1, 0.6), rng)
        mapping = list(range(n))
        rng.shuffle(mapping)
        assert len(maximum_matching(g)) == len(maximum_matching(g.relabel(mapping)))
