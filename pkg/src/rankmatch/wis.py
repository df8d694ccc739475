"""Wasteful independent sets.

A set ``I`` of ``2k`` vertices is a k-WIS for a RANKING output ``R`` when its
vertices are exactly the endpoints of ``k`` length-three augmenting paths of
``R xor OPT``.  Each such path ``(v2, v1, u1, u2)`` has its middle edge
``v1u1`` in ``R`` and the OPT edges ``v1v2``, ``u1u2``; the middle vertex
``v1`` has counterpart ``u2`` and ``u1`` has counterpart ``v2``.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .blossom import CapExceededError
from .graph import Graph, GraphError, Matching, Permutation, symmetric_difference, validate_matching
from .ranking import (
    EXHAUSTIVE_CAP,
    aug3_count,
    block_orders,
    chunk_seed,
    ranking_mates,
    ranking_run,
    run_sweep,
)

Path4 = tuple[int, int, int, int]


class MalformedQueryError(ValueError):
    pass


@dataclass(frozen=True)
class WisCertificate:
    vertex_set: frozenset[int]
    paths: tuple[Path4, ...]
    counterpart: dict[int, int] = field(compare=False, hash=False)

    @property
    def k(self) -> int:
        return len(self.paths)


def _find_paths(
    mate: Sequence[int], opt_mate: Sequence[int], vertices: Iterable[int]
) -> list[Path4] | None:
    members = set(vertices)
    paths: set[Path4] = set()
    for v in members:
        if mate[v] != -1:
            return None
        w = opt_mate[v]
        if w == -1 or w in members:
            return None
        x = mate[w]
        if x == -1 or opt_mate[w] == x:
            return None
        y = opt_mate[x]
        if y == -1 or mate[y] != -1 or y not in members:
            return None
        paths.add((v, w, x, y) if v < y else (y, x, w, v))
    return sorted(paths)


def _certificate(g: Graph, vertices: frozenset[int], paths: list[Path4]) -> WisCertificate | None:
    for u, v in itertools.combinations(sorted(vertices), 2):
        if g.has_edge(u, v):
            return None
    counterpart: dict[int, int] = {}
    for v2, v1, u1, u2 in paths:
        counterpart[v1] = u2
        counterpart[u1] = v2
    return WisCertificate(vertices, tuple(paths), counterpart)


def is_kwis(g: Graph, r: Matching, opt: Matching, vertices: Iterable[int]) -> WisCertificate | None:
    """Certificate that ``vertices`` form a k-WIS of ``r`` against ``opt``, else ``None``.

    Walks outward from each queried vertex along OPT, R, OPT edges; it does
    not consult the full symmetric-difference decomposition.
    """
    members = frozenset(vertices)
    if len(members) % 2:
        raise MalformedQueryError(f"a k-WIS has an even number of vertices, got {len(members)}")
    if any(not 0 <= v < g.n for v in members):
        raise MalformedQueryError("query vertex out of range")
    paths = _find_paths(r.mate_array(g.n), opt.mate_array(g.n), members)
    if paths is None:
        return None
    return _certificate(g, members, paths)


def count_kwis(r: Matching, opt: Matching, g: Graph, k: int) -> int:
    """Number of distinct k-WIS: one per k-subset of the length-three augmenting paths."""
    if k < 0:
        return 0
    return math.comb(len(symmetric_difference(r, opt, g).aug3), k)


@dataclass(frozen=True)
class Aug3BoundReport:
    matched: int
    mu: int
    alpha: Fraction | None
    aug3: int
    bound: Fraction
    passed: bool


def verify_aug3_lower_bound(g: Graph, m: Matching, opt: Matching) -> Aug3BoundReport:
    """Check that a maximal ``m`` with ``|m| = (1/2 + alpha) mu`` has at least
    ``(1/2 - 3 alpha) mu`` length-three augmenting paths against ``opt``."""
    if not validate_matching(g, m).maximal:
        raise GraphError("matching must be valid and maximal")
    a = len(symmetric_difference(m, opt, g).aug3)
    alpha, bound = aug3_bound(len(m), len(opt))
    return Aug3BoundReport(len(m), len(opt), alpha, a, bound, a >= bound)


def aug3_bound(matched: int, mu: int) -> tuple[Fraction | None, Fraction]:
    if mu == 0:
        return None, Fraction(0)
    alpha = Fraction(matched, mu) - Fraction(1, 2)
    return alpha, (Fraction(1, 2) - 3 * alpha) * mu


def verify_counterpart_order(cert: WisCertificate, p: Permutation) -> bool:
    pos = p.position
    return all(pos[v] < pos[c] for v, c in cert.counterpart.items())


# -- probabilities ----------------------------------------------------------


@dataclass(frozen=True)
class MonteCarlo:
    samples: int
    seed: int


@dataclass(frozen=True)
class ProbabilityEstimate:
    hits: int
    samples: int
    estimate: float
    ci95: tuple[float, float]


def wilson_interval(hits: int, samples: int, z: float = 1.959963984540054) -> tuple[float, float]:
    p = hits / samples
    denom = 1 + z * z / samples
    centre = (p + z * z / (2 * samples)) / denom
    half = z * math.sqrt(p * (1 - p) / samples + z * z / (4 * samples * samples)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class _HitTally:
    count: int = 0
    hits: int = 0

    def merge(self, other: _HitTally) -> _HitTally:
        return _HitTally(self.count + other.count, self.hits + other.hits)


@dataclass(frozen=True)
class _ProbabilityWorker:
    n: int
    adjacency: tuple[tuple[int, ...], ...]
    opt_mate: tuple[int, ...]
    members: frozenset[int]

    def __call__(self, prefix: tuple[int, ...]) -> _HitTally:
        tally = _HitTally()
        for order in block_orders(self.n, prefix):
            tally.count += 1
            mate = ranking_mates(self.adjacency, order)
            if _find_paths(mate, self.opt_mate, self.members) is not None:
                tally.hits += 1
        return tally


def kwis_probability(
    g: Graph,
    opt: Matching,
    vertices: Iterable[int],
    mode: str | MonteCarlo = "exhaustive",
    *,
    cap: int = EXHAUSTIVE_CAP,
    threads: int = 1,
) -> Fraction | ProbabilityEstimate:
    """Probability over a uniform order that RANKING leaves ``vertices`` as a k-WIS."""
    members = frozenset(vertices)
    if len(members) % 2:
        raise MalformedQueryError(f"a k-WIS has an even number of vertices, got {len(members)}")
    if any(not 0 <= v < g.n for v in members):
        raise MalformedQueryError("query vertex out of range")
    if any(g.has_edge(u, v) for u, v in itertools.combinations(members, 2)):
        # A dependent set is never a k-WIS.
        if isinstance(mode, MonteCarlo):
            return ProbabilityEstimate(0, mode.samples, 0.0, wilson_interval(0, mode.samples))
        return Fraction(0)
    opt_mate = tuple(opt.mate_array(g.n))
    if isinstance(mode, MonteCarlo):
        rng = random.Random(chunk_seed(mode.seed, 0))
        order = list(range(g.n))
        hits = 0
        for _ in range(mode.samples):
            rng.shuffle(order)
            if _find_paths(ranking_mates(g.adjacency, order), opt_mate, members) is not None:
                hits += 1
        return ProbabilityEstimate(hits, mode.samples, hits / mode.samples, wilson_interval(hits, mode.samples))
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    if g.n > cap:
        raise CapExceededError("kwis_probability", g.n, cap)
    tally = run_sweep(g.n, _ProbabilityWorker(g.n, g.adjacency, opt_mate, members), threads)
    return Fraction(tally.hits, tally.count)


def kwis_count_upper_bound(n: int, k: int) -> int:
    """``C(n/2, 2k) * 3^k``: the number of distinct k-WIS any RANKING output can exhibit."""
    _check_nk(n, k)
    return math.comb(n // 2, 2 * k) * 3**k


def _check_nk(n: int, k: int) -> None:
    if n < 0 or n % 2:
        raise ValueError(f"n must be a non-negative even integer, got {n}")
    if k < 0 or 2 * k > n // 2:
        raise ValueError(f"need 0 <= 2k <= n/2, got n={n}, k={k}")


# -- exhaustive structural sweep ---------------------------------------------


@dataclass
class WisTally:
    count: int = 0
    aug3_checked: int = 0
    aug3_bound_violations: int = 0
    certificates: int = 0
    counterpart_violations: int = 0
    cross_check_failures: int = 0
    hits: Counter = field(default_factory=Counter)

    def merge(self, other: WisTally) -> WisTally:
        return WisTally(
            self.count + other.count,
            self.aug3_checked + other.aug3_checked,
            self.aug3_bound_violations + other.aug3_bound_violations,
            self.certificates + other.certificates,
            self.counterpart_violations + other.counterpart_violations,
            self.cross_check_failures + other.cross_check_failures,
            self.hits + other.hits,
        )


@dataclass(frozen=True)
class _WisWorker:
    graph: Graph
    opt: Matching

    def __call__(self, prefix: tuple[int, ...]) -> WisTally:
        g, opt = self.graph, self.opt
        n = g.n
        opt_mate = tuple(opt.mate_array(n))
        mu = len(opt)
        tally = WisTally()
        for order in block_orders(n, prefix):
            tally.count += 1
            p = Permutation.from_order(order)
            r = ranking_run(g, p)
            dec = symmetric_difference(r, opt, g)
            paths = dec.aug3
            a = len(paths)
            if a != aug3_count(r.mate_array(n), opt_mate):
                tally.cross_check_failures += 1
            _, bound = aug3_bound(len(r), mu)
            tally.aug3_checked += 1
            if a < bound:
                tally.aug3_bound_violations += 1
            if not paths:
                continue
            endpoints = frozenset(v for path in paths for v in (path[0], path[3]))
            cert = is_kwis(g, r, opt, endpoints)
            if cert is None or cert.paths != paths:
                tally.cross_check_failures += 1
                continue
            for k in range(1, a + 1):
                for chosen in itertools.combinations(paths, k):
                    sub = frozenset(v for path in chosen for v in (path[0], path[3]))
                    tally.hits[sub] += 1
                    tally.certificates += 1
                    restricted = {v: c for v, c in cert.counterpart.items() if c in sub}
                    if not all(p.position[v] < p.position[c] for v, c in restricted.items()):
                        tally.counterpart_violations += 1
        return tally


@dataclass(frozen=True)
class WisSweepReport:
    n: int
    n_factorial: int
    tally: WisTally

    def probability(self, vertices: Iterable[int]) -> Fraction:
        return Fraction(self.tally.hits.get(frozenset(vertices), 0), self.n_factorial)

    def distinct_kwis(self, k: int) -> set[frozenset[int]]:
        return {s for s in self.tally.hits if len(s) == 2 * k}


def independent_sets(g: Graph, size: int) -> Iterable[frozenset[int]]:
    for combo in itertools.combinations(range(g.n), size):
        if not any(g.has_edge(u, v) for u, v in itertools.combinations(combo, 2)):
            yield frozenset(combo)


def wis_sweep(g: Graph, opt: Matching, *, cap: int = EXHAUSTIVE_CAP, threads: int = 1) -> WisSweepReport:
    """Exhaustive structural audit of every RANKING outcome on ``g``.

    For every order it checks the aug3 lower bound, cross-checks the path
    decomposition against the edge scan and ``is_kwis``, records every k-WIS
    vertex set, and checks counterpart ordering on every certificate.
    """
    if g.n > cap:
        raise CapExceededError("wis_sweep", g.n, cap)
    if not validate_matching(g, opt).valid:
        raise GraphError("OPT is not a matching of the graph")
    tally = run_sweep(g.n, _WisWorker(g, opt), threads)
    return WisSweepReport(g.n, math.factorial(g.n), tally)
