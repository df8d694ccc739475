"""Graphs, matchings, permutations and the symmetric-difference decomposition.

Vertices are dense integer ids ``0..n-1``.  Edges are stored as sorted
pairs ``(u, v)`` with ``u < v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised when a graph or matching violates its structural invariants."""


class ParseError(ValueError):
    """Base class for edge-list parse failures; ``line`` is 1-based."""

    kind = "parse error"

    def __init__(self, line: int, detail: str) -> None:
        self.line = line
        self.detail = detail
        super().__init__(f"line {line}: {self.kind}: {detail}")


class MalformedLineError(ParseError):
    kind = "malformed line"


class VertexRangeError(ParseError):
    kind = "vertex id out of range"


class DuplicateEdgeError(ParseError):
    kind = "duplicate edge"


class SelfLoopError(ParseError):
    kind = "self-loop"


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[Edge]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        if n < 0:
            raise GraphError(f"negative vertex count {n}")
        seen: set[Edge] = set()
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            e = _norm(u, v)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            nbrs[u].append(v)
            nbrs[v].append(u)
        adjacency = tuple(tuple(sorted(a)) for a in nbrs)
        return cls(n, frozenset(seen), adjacency)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def relabel(self, mapping: Sequence[int]) -> Graph:
        """Return the isomorphic graph with vertex ``v`` renamed ``mapping[v]``."""
        return Graph.from_edges(self.n, ((mapping[u], mapping[v]) for u, v in self.edges))


@dataclass(frozen=True)
class Matching:
    edges: frozenset[Edge]
    mate: dict[int, int] = field(repr=False, compare=False, hash=False)

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]]) -> Matching:
        mate: dict[int, int] = {}
        normed: set[Edge] = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop ({u}, {v}) in matching")
            if u in mate or v in mate:
                raise GraphError(f"matching edges share a vertex at ({u}, {v})")
            mate[u] = v
            mate[v] = u
            normed.add(_norm(u, v))
        return cls(frozenset(normed), mate)

    @classmethod
    def from_mates(cls, mates: Sequence[int]) -> Matching:
        """Build from a mate array where ``-1`` marks an unmatched vertex."""
        return cls.from_edges((u, w) for u, w in enumerate(mates) if w > u)

    def __len__(self) -> int:
        return len(self.edges)

    def is_matched(self, v: int) -> bool:
        return v in self.mate

    def mate_array(self, n: int) -> list[int]:
        out = [-1] * n
        for u, v in self.mate.items():
            out[u] = v
        return out

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def relabel(self, mapping: Sequence[int]) -> Matching:
        return Matching.from_edges((mapping[u], mapping[v]) for u, v in self.edges)


@dataclass(frozen=True)
class Permutation:
    """A vertex ordering.  ``position[v]`` is the rank of ``v``; ``order`` is its inverse."""

    order: tuple[int, ...]
    position: tuple[int, ...] = field(repr=False, compare=False)

    @classmethod
    def from_order(cls, order: Iterable[int]) -> Permutation:
        order = tuple(order)
        n = len(order)
        position = [-1] * n
        for i, v in enumerate(order):
            if not 0 <= v < n or position[v] != -1:
                raise GraphError(f"order {order} is not a permutation of 0..{n - 1}")
            position[v] = i
        return cls(order, tuple(position))

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls.from_order(range(n))

    def __len__(self) -> int:
        return len(self.order)


class MatchingCheck(NamedTuple):
    valid: bool
    maximal: bool
    perfect: bool


def validate_matching(g: Graph, m: Matching | Iterable[Sequence[int]]) -> MatchingCheck:
    """Report whether ``m`` is a matching of ``g`` and, if so, maximal / perfect.

    ``m`` may be a raw iterable of pairs so that non-disjoint edge sets can be
    judged instead of rejected at construction.
    """
    pairs = list(m.edges) if isinstance(m, Matching) else [tuple(e) for e in m]
    covered: set[int] = set()
    for u, v in pairs:
        in_range = 0 <= u < g.n and 0 <= v < g.n
        if u == v or not in_range or not g.has_edge(u, v):
            return MatchingCheck(False, False, False)
        if u in covered or v in covered:
            return MatchingCheck(False, False, False)
        covered.add(u)
        covered.add(v)
    maximal = not any(u not in covered and v not in covered for u, v in g.edges)
    return MatchingCheck(True, maximal, len(covered) == g.n)


def parse_graph(text: str) -> Graph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MalformedLineError(1, "missing 'n m' header")

    def ints(lineno: int, raw: str) -> tuple[int, int]:
        parts = raw.split()
        if len(parts) != 2:
            raise MalformedLineError(lineno, f"expected two integers, got {raw!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLineError(lineno, f"expected two integers, got {raw!r}") from None
        return a, b

    n, m = ints(1, lines[0])
    if n < 0 or m < 0:
        raise MalformedLineError(1, "n and m must be non-negative")
    seen: set[Edge] = set()
    edges: list[Edge] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        u, v = ints(lineno, raw)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(lineno, f"({u}, {v}) not in 0..{n - 1}")
        if u == v:
            raise SelfLoopError(lineno, f"vertex {u}")
        e = _norm(u, v)
        if e in seen:
            raise DuplicateEdgeError(lineno, f"{e}")
        seen.add(e)
        edges.append(e)
    if len(edges) != m:
        bad = m + 2 if len(edges) > m else len(lines) + 1
        raise MalformedLineError(bad, f"header declares {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def serialize_graph(g: Graph) -> str:
    return "".join([f"{g.n} {g.m}\n", *(f"{u} {v}\n" for u, v in g.sorted_edges())])


def parse_matching(text: str, g: Graph | None = None) -> Matching:
    """Parse a matching sidecar: one ``u v`` pair per line, no header."""
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        parts = raw.split()
        try:
            u, v = (int(x) for x in parts) if len(parts) == 2 else (None, None)
        except ValueError:
            u = v = None
        if u is None or v is None:
            raise MalformedLineError(lineno, f"expected two integers, got {raw!r}")
        if g is not None and not (0 <= u < g.n and 0 <= v < g.n):
            raise VertexRangeError(lineno, f"({u}, {v}) not in 0..{g.n - 1}")
        edges.append((u, v))
    try:
        m = Matching.from_edges(edges)
    except GraphError as exc:
        raise MalformedLineError(len(edges), str(exc)) from None
    if g is not None and not validate_matching(g, m).valid:
        raise GraphError("matching uses an edge absent from the graph")
    return m


def serialize_matching(m: Matching) -> str:
    return "".join(f"{u} {v}\n" for u, v in m.sorted_edges())


@dataclass(frozen=True)
class Component:
    """One connected component of ``M xor OPT``.

    ``vertices`` lists the walk order; for a cycle the first vertex is not
    repeated.  ``length`` counts edges.
    """

    vertices: tuple[int, ...]
    length: int
    cycle: bool
    augmenting: bool


@dataclass(frozen=True)
class AugDecomposition:
    components: tuple[Component, ...]
    aug3: tuple[tuple[int, int, int, int], ...]

    def __len__(self) -> int:
        return len(self.components)


def symmetric_difference(m: Matching, opt: Matching, g: Graph) -> AugDecomposition:
    """Split ``m xor opt`` into alternating paths and cycles.

    Paths start at their smaller endpoint; cycles start at their smallest
    vertex and step first to its smaller neighbour.  Length-three augmenting
    paths are listed in ``aug3`` as ``(v2, v1, u1, u2)`` with ``v2 < u2``.
    """
    if not validate_matching(g, m).valid or not validate_matching(g, opt).valid:
        raise GraphError("both matchings must be valid in the graph")

    diff = m.edges ^ opt.edges
    nbrs: dict[int, list[int]] = {}
    for u, v in diff:
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    for lst in nbrs.values():
        lst.sort()

    def walk(start: int, first: int) -> list[int]:
        seq = [start, first]
        while True:
            prev, cur = seq[-2], seq[-1]
            nxt = [w for w in nbrs[cur] if w != prev]
            if not nxt or nxt[0] == start:
                return seq
            seq.append(nxt[0])

    visited: set[int] = set()
    comps: list[Component] = []
    # Path endpoints first so that every path is walked from an end.
    for v in sorted(nbrs, key=lambda x: (len(nbrs[x]) != 1, x)):
        if v in visited:
            continue
        if len(nbrs[v]) == 1:
            seq = walk(v, nbrs[v][0])
            aug = not m.is_matched(seq[0]) and not m.is_matched(seq[-1])
            comps.append(Component(tuple(seq), len(seq) - 1, False, aug))
        else:
            seq = walk(v, nbrs[v][0])
            comps.append(Component(tuple(seq), len(seq), True, False))
        visited.update(seq)

    comps.sort(key=lambda c: min(c.vertices))
    aug3 = tuple(
        sorted(c.vertices for c in comps if c.augmenting and c.length == 3)  # type: ignore[misc]
    )
    return AugDecomposition(tuple(comps), aug3)
