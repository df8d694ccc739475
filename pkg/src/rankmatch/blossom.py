"""Exact maximum-cardinality matching for general graphs."""

from __future__ import annotations

from collections import deque
from functools import lru_cache

from .graph import Graph, Matching

BRUTE_FORCE_CAP = 16


class CapExceededError(ValueError):
    """The instance is larger than an exhaustive routine is allowed to handle."""

    def __init__(self, what: str, n: int, cap: int) -> None:
        self.n = n
        self.cap = cap
        super().__init__(f"{what}: n={n} exceeds cap {cap}; raise the cap to at least {n}")


def maximum_matching(g: Graph) -> Matching:
    """Edmonds' blossom algorithm, unweighted.

    One augmenting-path search per initially free vertex; a vertex that
    fails to find one never gains one later, so a single pass suffices.
    Runs in O(n^3).
    """
    n = g.n
    adj = g.adjacency
    match = [-1] * n

    # Greedy warm start: cuts the number of searches roughly in half.
    for u in range(n):
        if match[u] == -1:
            for w in adj[u]:
                if match[w] == -1:
                    match[u], match[w] = w, u
                    break

    def lca(a: int, b: int, base: list[int], parent: list[int]) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def search(root: int) -> int:
        used = [False] * n
        parent = [-1] * n
        base = list(range(n))
        used[root] = True
        queue = deque([root])

        def mark(v: int, b: int, child: int, in_blossom: list[bool]) -> None:
            while base[v] != b:
                in_blossom[base[v]] = in_blossom[base[match[v]]] = True
                parent[v] = child
                child = match[v]
                v = parent[match[v]]

        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to, base, parent)
                    in_blossom = [False] * n
                    mark(v, cur, to, in_blossom)
                    mark(to, cur, v, in_blossom)
                    for i in range(n):
                        if in_blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return _augment(to, parent)
                    used[match[to]] = True
                    queue.append(match[to])
        return -1

    def _augment(v: int, parent: list[int]) -> int:
        end = v
        while v != -1:
            pv = parent[v]
            ppv = match[pv]
            match[v] = pv
            match[pv] = v
            v = ppv
        return end

    for root in range(n):
        if match[root] == -1 and adj[root]:
            search(root)
    return Matching.from_mates(match)


def brute_force_maximum(g: Graph, cap: int = BRUTE_FORCE_CAP) -> Matching:
    """Exhaustive maximum matching by branching on the lowest remaining vertex."""
    if g.n > cap:
        raise CapExceededError("brute_force_maximum", g.n, cap)
    adj_mask = [sum(1 << w for w in nb) for nb in g.adjacency]

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[int, tuple[tuple[int, int], ...]]:
        if not mask:
            return 0, ()
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        size, edges = best(rest)
        cand = adj_mask[v] & rest
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            s, e = best(rest & ~low)
            if s + 1 > size:
                size, edges = s + 1, ((v, w),) + e
        return size, edges

    _, edges = best((1 << g.n) - 1)
    return Matching.from_edges(edges)


def has_perfect_matching(g: Graph) -> bool:
    return g.n % 2 == 0 and 2 * len(maximum_matching(g)) == g.n
