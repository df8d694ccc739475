"""RANKING and its baselines, plus exhaustive and Monte Carlo drivers.

RANKING draws one uniform vertex order, walks the vertices in that order and
matches each still-free vertex to its free neighbour that comes earliest in
the same order.  MRG picks the neighbour uniformly at random instead, and the
edge-greedy baseline scans a uniformly shuffled edge list.

Exhaustive sweeps enumerate all ``n!`` orders lexicographically.  The rank
space is cut into contiguous blocks that share a fixed prefix; blocks are
evaluated independently (optionally in a process pool) and their tallies are
merged in block order, so results never depend on the worker count.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Protocol, Sequence, TypeVar

import numpy as np

from .blossom import CapExceededError, maximum_matching
from .graph import Graph, GraphError, Matching, Permutation, validate_matching

EXHAUSTIVE_CAP = 11
SUFFIX_BLOCK = 7  # each sweep block enumerates at most 7! = 5040 suffixes


@dataclass(frozen=True)
class RunRecord:
    permutation: Permutation | None
    matching: Matching
    matched_count: int
    edge_order: tuple[tuple[int, int], ...] | None = None


def ranking_mates(adjacency: Sequence[Sequence[int]], order: Sequence[int]) -> list[int]:
    """Hot-path RANKING on raw adjacency; returns the mate array (-1 = free)."""
    n = len(order)
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    mate = [-1] * n
    for v in order:
        if mate[v] != -1:
            continue
        best = -1
        best_pos = n
        for w in adjacency[v]:
            if mate[w] == -1 and pos[w] < best_pos:
                best = w
                best_pos = pos[w]
        if best != -1:
            mate[v] = best
            mate[best] = v
    return mate


def ranking_run(g: Graph, p: Permutation) -> Matching:
    if len(p) != g.n:
        raise GraphError(f"permutation over {len(p)} vertices for a graph with n={g.n}")
    return Matching.from_mates(ranking_mates(g.adjacency, p.order))


def sample_ranking(g: Graph, seed: int) -> RunRecord:
    """One RANKING run under a Fisher-Yates order drawn from ``random.Random(seed)``."""
    order = list(range(g.n))
    random.Random(seed).shuffle(order)
    p = Permutation.from_order(order)
    m = ranking_run(g, p)
    return RunRecord(p, m, len(m))


def _mrg_mates(adjacency: Sequence[Sequence[int]], rng: random.Random) -> tuple[list[int], list[int]]:
    n = len(adjacency)
    order = list(range(n))
    rng.shuffle(order)
    mate = [-1] * n
    for v in order:
        if mate[v] != -1:
            continue
        free = [w for w in adjacency[v] if mate[w] == -1]
        if free:
            w = free[rng.randrange(len(free))]
            mate[v] = w
            mate[w] = v
    return order, mate


def mrg_run(g: Graph, seed: int | random.Random) -> RunRecord:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    order, mate = _mrg_mates(g.adjacency, rng)
    m = Matching.from_mates(mate)
    return RunRecord(Permutation.from_order(order), m, len(m))


def _edge_greedy_mates(g: Graph, rng: random.Random) -> tuple[list[tuple[int, int]], list[int]]:
    edges = g.sorted_edges()
    rng.shuffle(edges)
    mate = [-1] * g.n
    for u, v in edges:
        if mate[u] == -1 and mate[v] == -1:
            mate[u] = v
            mate[v] = u
    return edges, mate


def edge_greedy_run(g: Graph, seed: int | random.Random) -> RunRecord:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    edges, mate = _edge_greedy_mates(g, rng)
    m = Matching.from_mates(mate)
    return RunRecord(None, m, len(m), tuple(edges))


# -- exhaustive enumeration -------------------------------------------------

T = TypeVar("T", bound="Mergeable")


class Mergeable(Protocol):
    def merge(self: T, other: T) -> T: ...


def sweep_blocks(n: int) -> list[tuple[int, ...]]:
    """Prefixes whose suffix enumerations tile the lexicographic rank space in order."""
    depth = max(0, n - SUFFIX_BLOCK)
    return list(itertools.permutations(range(n), depth))


def block_orders(n: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    used = set(prefix)
    rest = [v for v in range(n) if v not in used]
    for suffix in itertools.permutations(rest):
        yield prefix + suffix


def run_sweep(n: int, worker: Callable[[tuple[int, ...]], T], threads: int = 1) -> T:
    """Apply ``worker`` to every block and merge partial tallies in block order.

    ``worker`` must be picklable when ``threads > 1``.
    """
    blocks = sweep_blocks(n)
    if threads > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunk = max(1, len(blocks) // (4 * threads))
            partials = list(pool.map(worker, blocks, chunksize=chunk))
    else:
        partials = [worker(b) for b in blocks]
    total = partials[0]
    for part in partials[1:]:
        total = total.merge(part)
    return total


def aug3_count(mate: Sequence[int], opt_mate: Sequence[int]) -> int:
    """Count length-three augmenting paths of ``mate xor opt`` by scanning matched edges.

    A matched edge ``{u, v}`` not in OPT is the middle of such a path exactly
    when both OPT partners exist and are free.
    """
    a = 0
    for u, v in enumerate(mate):
        if v > u:
            x = opt_mate[u]
            y = opt_mate[v]
            if x != -1 and y != -1 and x != v and mate[x] == -1 and mate[y] == -1:
                a += 1
    return a


@dataclass
class _StatsTally:
    count: int = 0
    sizes: Counter = field(default_factory=Counter)
    aug3: Counter = field(default_factory=Counter)

    def merge(self, other: _StatsTally) -> _StatsTally:
        return _StatsTally(self.count + other.count, self.sizes + other.sizes, self.aug3 + other.aug3)


@dataclass(frozen=True)
class _StatsWorker:
    n: int
    adjacency: tuple[tuple[int, ...], ...]
    opt_mate: tuple[int, ...]

    def __call__(self, prefix: tuple[int, ...]) -> _StatsTally:
        adj = self.adjacency
        opt_mate = self.opt_mate
        sizes: Counter = Counter()
        augs: Counter = Counter()
        count = 0
        for order in block_orders(self.n, prefix):
            mate = ranking_mates(adj, order)
            count += 1
            sizes[(self.n - mate.count(-1)) // 2] += 1
            augs[aug3_count(mate, opt_mate)] += 1
        return _StatsTally(count, sizes, augs)


@dataclass(frozen=True)
class ExhaustiveStats:
    n: int
    n_factorial: int
    mu: int
    size_histogram: dict[int, int]
    sum_sizes: int
    aug3_histogram: dict[int, int]
    sum_aug3: int
    expected_kwis: dict[int, Fraction]

    @property
    def expected_size(self) -> Fraction:
        return Fraction(self.sum_sizes, self.n_factorial)

    @property
    def expected_ratio(self) -> Fraction | None:
        if self.mu == 0:
            return None
        return Fraction(self.sum_sizes, self.n_factorial * self.mu)

    def kwis_expectation(self, k: int) -> Fraction:
        """Exact mean of ``C(a_i, k)`` over all orders, for any ``k``."""
        total = sum(cnt * math.comb(a, k) for a, cnt in self.aug3_histogram.items())
        return Fraction(total, self.n_factorial)


def check_opt(g: Graph, opt: Matching) -> None:
    if not validate_matching(g, opt).valid:
        raise GraphError("OPT is not a matching of the graph")
    if len(maximum_matching(g)) != len(opt):
        raise GraphError("OPT is not a maximum matching of the graph")


def exhaustive_stats(
    g: Graph,
    opt: Matching,
    ks: Iterable[int] = (),
    *,
    cap: int = EXHAUSTIVE_CAP,
    threads: int = 1,
) -> ExhaustiveStats:
    """Run RANKING under every vertex order and tally exact statistics against ``opt``."""
    if g.n > cap:
        raise CapExceededError("exhaustive_stats", g.n, cap)
    check_opt(g, opt)
    worker = _StatsWorker(g.n, g.adjacency, tuple(opt.mate_array(g.n)))
    tally = run_sweep(g.n, worker, threads)
    n_fact = math.factorial(g.n)
    assert tally.count == n_fact
    sizes = dict(sorted(tally.sizes.items()))
    augs = dict(sorted(tally.aug3.items()))
    stats = ExhaustiveStats(
        n=g.n,
        n_factorial=n_fact,
        mu=len(opt),
        size_histogram=sizes,
        sum_sizes=sum(s * c for s, c in sizes.items()),
        aug3_histogram=augs,
        sum_aug3=sum(a * c for a, c in augs.items()),
        expected_kwis={},
    )
    for k in sorted(set(ks)):
        if k < 0:
            raise ValueError(f"k must be non-negative, got {k}")
        stats.expected_kwis[k] = stats.kwis_expectation(k)
    return stats


# -- Monte Carlo ------------------------------------------------------------

ALGORITHMS = ("ranking", "mrg", "edge-greedy")
MC_CHUNK = 1 << 14


def chunk_seed(seed: int, index: int) -> int:
    """Independent 128-bit stream seed for chunk ``index`` of master ``seed``."""
    words = np.random.SeedSequence(entropy=seed, spawn_key=(index,)).generate_state(4, np.uint32)
    return int.from_bytes(words.astype("<u4").tobytes(), "little")


@dataclass(frozen=True)
class _MonteCarloWorker:
    graph: Graph
    algorithm: str
    seed: int

    def __call__(self, job: tuple[int, int]) -> Counter:
        index, count = job
        rng = random.Random(chunk_seed(self.seed, index))
        g = self.graph
        n = g.n
        sizes: Counter = Counter()
        if self.algorithm == "ranking":
            order = list(range(n))
            adj = g.adjacency
            for _ in range(count):
                rng.shuffle(order)
                sizes[(n - ranking_mates(adj, order).count(-1)) // 2] += 1
        elif self.algorithm == "mrg":
            for _ in range(count):
                sizes[(n - _mrg_mates(g.adjacency, rng)[1].count(-1)) // 2] += 1
        elif self.algorithm == "edge-greedy":
            for _ in range(count):
                sizes[(n - _edge_greedy_mates(g, rng)[1].count(-1)) // 2] += 1
        else:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        return sizes


def monte_carlo_sizes(
    g: Graph, samples: int, seed: int, algorithm: str = "ranking", threads: int = 1
) -> dict[int, int]:
    """Histogram of output sizes over ``samples`` independent runs.

    Samples are split into fixed chunks of ``MC_CHUNK``; chunk ``i`` draws from
    its own stream derived from ``(seed, i)``, so the histogram is the same
    for every ``threads`` value.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    jobs = [(i, min(MC_CHUNK, samples - lo)) for i, lo in enumerate(range(0, samples, MC_CHUNK))]
    worker = _MonteCarloWorker(g, algorithm, seed)
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(worker, jobs))
    else:
        parts = [worker(j) for j in jobs]
    total: Counter = Counter()
    for part in parts:
        total += part
    return dict(sorted(total.items()))
