"""Reproducible instance generators.  Every generator returns ``(graph, planted_opt)``."""

from __future__ import annotations

import random

from .graph import Graph, Matching, validate_matching


def gen_gadget_chain(copies: int) -> tuple[Graph, Matching]:
    """``copies`` disjoint paths ``v2 - v1 - u1 - u2``.

    Copy ``i`` uses ids ``4i .. 4i+3`` in the order ``v2, v1, u1, u2``; OPT is
    ``{v2 v1, u1 u2}`` and the chord ``v1 u1`` is the edge RANKING can waste.
    """
    if copies < 1:
        raise ValueError("copies must be at least 1")
    edges: list[tuple[int, int]] = []
    opt: list[tuple[int, int]] = []
    for i in range(copies):
        v2, v1, u1, u2 = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        edges += [(v2, v1), (v1, u1), (u1, u2)]
        opt += [(v2, v1), (u1, u2)]
    return Graph.from_edges(4 * copies, edges), Matching.from_edges(opt)


def gen_replicated(g: Graph, opt: Matching, b: int) -> tuple[Graph, Matching]:
    """``2b`` disjoint copies; copy ``i`` occupies ids ``[i n, (i+1) n)``."""
    if b < 1:
        raise ValueError("b must be at least 1")
    if not validate_matching(g, opt).perfect:
        raise ValueError("OPT must be a perfect matching of the graph")
    n = g.n
    copies = 2 * b
    edges = [(u + i * n, v + i * n) for i in range(copies) for u, v in g.sorted_edges()]
    mopt = [(u + i * n, v + i * n) for i in range(copies) for u, v in opt.sorted_edges()]
    return Graph.from_edges(copies * n, edges), Matching.from_edges(mopt)


def gen_random_planted(n: int, extra_edge_prob: float, seed: int) -> tuple[Graph, Matching]:
    """Random perfect matching on ``n`` vertices plus independent extra edges."""
    if n < 0 or n % 2:
        raise ValueError(f"n must be a non-negative even integer, got {n}")
    if not 0.0 <= extra_edge_prob <= 1.0:
        raise ValueError("extra_edge_prob must be a probability")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    planted = [(order[2 * i], order[2 * i + 1]) for i in range(n // 2)]
    opt = Matching.from_edges(planted)
    edges = list(opt.edges)
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in opt.edges and rng.random() < extra_edge_prob:
                edges.append((u, v))
    return Graph.from_edges(n, edges), opt
