from __future__ import annotations

import itertools

import pytest
from hypothesis import given

from rankmatch.graph import (
    DuplicateEdgeError,
    Graph,
    GraphError,
    MalformedLineError,
    Matching,
    Permutation,
    SelfLoopError,
    VertexRangeError,
    parse_graph,
    parse_matching,
    serialize_graph,
    serialize_matching,
    symmetric_difference,
    validate_matching,
)

from .conftest import graphs


def test_parse_single_edge():
    g = parse_graph("2 1\n0 1")
    assert g.n == 2
    assert g.edges == {(0, 1)}


def test_parse_path():
    g = parse_graph("4 3\n0 1\n1 2\n2 3")
    assert g.edges == {(0, 1), (1, 2), (2, 3)}
    assert g.adjacency == ((1,), (0, 2), (1, 3), (2,))


@pytest.mark.parametrize(
    "text, exc, line",
    [
        ("3 1\n0 0", SelfLoopError, 2),
        ("3 2\n0 1\n1 0", DuplicateEdgeError, 3),
        ("3 1\n0 3", VertexRangeError, 2),
        ("3 1\n0 -1", VertexRangeError, 2),
        ("3 1\n0 x", MalformedLineError, 2),
        ("3 1\n0 1 2", MalformedLineError, 2),
        ("three 1\n0 1", MalformedLineError, 1),
        ("3 2\n0 1", MalformedLineError, 3),
        ("3 1\n0 1\n1 2", MalformedLineError, 3),
        ("", MalformedLineError, 1),
    ],
)
def test_parse_errors_name_the_line(text, exc, line):
    with pytest.raises(exc) as info:
        parse_graph(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_parse_error_kinds_are_distinct():
    kinds = {MalformedLineError, VertexRangeError, DuplicateEdgeError, SelfLoopError}
    assert len({k.kind for k in kinds}) == 4


def test_serializer_is_sorted_and_lf_terminated():
    g = Graph.from_edges(4, [(3, 2), (1, 0), (2, 1)])
    assert serialize_graph(g) == "4 3\n0 1\n1 2\n2 3\n"


@given(graphs())
def test_parse_serialize_roundtrip(g):
    text = serialize_graph(g)
    assert parse_graph(text) == g
    assert serialize_graph(parse_graph(text)) == text


def test_matching_roundtrip():
    m = Matching.from_edges([(3, 2), (0, 1)])
    assert parse_matching(serialize_matching(m)) == m
    assert serialize_matching(m) == "0 1\n2 3\n"


def test_matching_rejects_shared_vertex():
    with pytest.raises(GraphError):
        Matching.from_edges([(0, 1), (1, 2)])


def test_permutation_inverse():
    p = Permutation.from_order([2, 0, 3, 1])
    assert p.position == (1, 3, 0, 2)
    assert all(p.order[p.position[v]] == v for v in range(4))
    with pytest.raises(GraphError):
        Permutation.from_order([0, 0, 1])


def test_validate_middle_edge(p4):
    assert validate_matching(p4, Matching.from_edges([(1, 2)])) == (True, True, False)


def test_validate_perfect(p4):
    assert validate_matching(p4, Matching.from_edges([(0, 1), (2, 3)])) == (True, True, True)


def test_validate_shared_vertex(p4):
    assert not validate_matching(p4, [(0, 1), (1, 2)]).valid


def test_validate_non_edge(p4):
    assert not validate_matching(p4, [(0, 2)]).valid
    assert not validate_matching(p4, [(0, 9)]).valid


def test_validate_not_maximal(p4):
    assert validate_matching(p4, Matching.from_edges([(0, 1)])) == (True, False, False)


def test_symmetric_difference_identity(g4):
    g, opt = g4
    dec = symmetric_difference(opt, opt, g)
    assert dec.components == () and dec.aug3 == ()


def test_symmetric_difference_gadget(g4):
    g, opt = g4
    dec = symmetric_difference(Matching.from_edges([(1, 2)]), opt, g)
    assert dec.aug3 == ((0, 1, 2, 3),)
    (comp,) = dec.components
    assert comp.length == 3 and comp.augmenting and not comp.cycle


def test_symmetric_difference_two_copies(g4):
    g, opt = g4
    g2 = Graph.from_edges(8, [*g.edges, *((u + 4, v + 4) for u, v in g.edges)])
    opt2 = Matching.from_edges([*opt.edges, *((u + 4, v + 4) for u, v in opt.edges)])
    r2 = Matching.from_edges([(1, 2), (5, 6)])
    dec = symmetric_difference(r2, opt2, g2)
    assert dec.aug3 == ((0, 1, 2, 3), (4, 5, 6, 7))
    assert len(_scan_components(r2.edges ^ opt2.edges)) == 2


def test_symmetric_difference_orientation():
    # Lexicographically smaller endpoint comes first even when ids run backwards.
    g = Graph.from_edges(4, [(3, 2), (2, 1), (1, 0)])
    opt = Matching.from_edges([(3, 2), (1, 0)])
    dec = symmetric_difference(Matching.from_edges([(2, 1)]), opt, g)
    assert dec.aug3 == ((0, 1, 2, 3),)


def test_symmetric_difference_cycle():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    m = Matching.from_edges([(0, 1), (2, 3)])
    opt = Matching.from_edges([(1, 2), (3, 0)])
    (comp,) = symmetric_difference(m, opt, g).components
    assert comp.cycle and comp.length == 4 and comp.vertices == (0, 1, 2, 3)


def test_symmetric_difference_rejects_invalid(p4):
    with pytest.raises(GraphError):
        symmetric_difference(Matching.from_edges([(0, 2)]), Matching.from_edges([(0, 1)]), p4)


def _scan_components(edges):
    """Union-find component scan used as an independent oracle."""
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    groups: dict[int, set[int]] = {}
    for v in list(parent):
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


def _all_matchings(g):
    edges = g.sorted_edges()
    for r in range(len(edges) + 1):
        for combo in itertools.combinations(edges, r):
            if validate_matching(g, combo).valid:
                yield Matching.from_edges(combo)


@given(graphs(max_n=7))
def test_decomposition_partitions_and_degree(g):
    ms = list(_all_matchings(g))[:12]
    for m in ms:
        for opt in ms:
            dec = symmetric_difference(m, opt, g)
            diff = m.edges ^ opt.edges
            covered = set()
            for comp in dec.components:
                vs = comp.vertices
                steps = list(zip(vs, vs[1:])) + ([(vs[-1], vs[0])] if comp.cycle else [])
                assert len(steps) == comp.length
                for u, v in steps:
                    covered.add((min(u, v), max(u, v)))
                if comp.cycle:
                    assert comp.length % 2 == 0
            assert covered == diff
            assert len(dec.components) == len(_scan_components(diff))
            # Independent per-edge count of length-three augmenting paths.
            expected = sum(
                1
                for u, v in m.edges
                if (u, v) not in opt.edges
                and u in opt.mate and v in opt.mate
                and opt.mate[u] not in m.mate and opt.mate[v] not in m.mate
            )
            assert len(dec.aug3) == expected
            for v2, v1, u1, u2 in dec.aug3:
                assert v2 < u2
                assert not m.is_matched(v2) and not m.is_matched(u2)
                assert m.mate[v1] == u1
                assert opt.mate[v1] == v2 and opt.mate[u1] == u2
