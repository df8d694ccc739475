"""Binomial and entropy bounds behind the 0.505 guarantee.

Inequalities that are purely combinatorial are decided with exact integers
and ``Fraction``.  Only the entropy threshold needs logarithms; it is
evaluated with mpmath interval arithmetic so that a reported sign is never
an artefact of rounding.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath
from mpmath import iv

MIN_PRECISION_BITS = 53
MAX_PRECISION_BITS = 4096
ROOT_BRACKET = (Fraction(1, 1000), Fraction(1, 100))


def binary_entropy(alpha: float | Fraction) -> float:
    """H(a) = -a log2 a - (1-a) log2(1-a), with H(0) = H(1) = 0."""
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if alpha == 0 or alpha == 1:
        return 0.0
    with mpmath.workprec(80):
        a = mpmath.mpf(alpha.numerator) / alpha.denominator if isinstance(alpha, Fraction) else mpmath.mpf(alpha)
        return float(-a * mpmath.log(a, 2) - (1 - a) * mpmath.log(1 - a, 2))


def binomial_entropy_check(n: int, alpha: Fraction) -> bool:
    """Decide ``C(n, an) <= 2^(n H(a))`` exactly.

    With ``a = j/n`` the right side equals ``n^n / (j^j (n-j)^(n-j))``, so the
    comparison reduces to integers.
    """
    alpha = Fraction(alpha)
    j = alpha * n
    if n < 1 or j.denominator != 1:
        raise ValueError(f"alpha*n must be a positive integer, got n={n}, alpha={alpha}")
    if not Fraction(1, n) <= alpha <= Fraction(1, 2):
        raise ValueError(f"need 1/n <= alpha <= 1/2, got alpha={alpha}")
    j = int(j)
    return math.comb(n, j) * j**j * (n - j) ** (n - j) <= n**n


def balanced_sum(m: int, parts: int, x: int) -> int:
    q, r = divmod(m, parts)
    return (parts - r) * math.comb(q, x) + r * math.comb(q + 1, x)


def compositions(m: int, parts: int):
    """All ordered ways to write ``m`` as ``parts`` non-negative integers."""
    for bars in itertools.combinations(range(m + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(m + parts - 1 - prev - 1)
        yield tuple(out)


def _random_composition(m: int, parts: int, rng: random.Random) -> tuple[int, ...]:
    bars = sorted(rng.sample(range(m + parts - 1), parts - 1))
    edges = [-1, *bars, m + parts - 1]
    return tuple(b - a - 1 for a, b in zip(edges, edges[1:]))


def balanced_binomial_min_check(
    m: int, n_parts: int, x: int, trials: int = 1000, seed: int = 0, exhaustive_limit: int = 200_000
) -> bool:
    """True iff the balanced split of ``m`` minimises ``sum C(a_i, x)``.

    Sampled compositions are always checked; when there are at most
    ``exhaustive_limit`` compositions every one of them is checked too.
    """
    if m < 1 or n_parts < 1 or x < 1:
        raise ValueError("m, n_parts and x must be positive")
    best = balanced_sum(m, n_parts, x)
    rng = random.Random(seed)
    for _ in range(trials):
        if sum(math.comb(a, x) for a in _random_composition(m, n_parts, rng)) < best:
            return False
    if math.comb(m + n_parts - 1, n_parts - 1) <= exhaustive_limit:
        return all(sum(math.comb(a, x) for a in comp) >= best for comp in compositions(m, n_parts))
    return True


def kwis_expected_upper_bound(n: int, k: int) -> Fraction:
    """``C(n/2, 2k) (3/4)^k`` as an exact rational."""
    if n < 0 or n % 2:
        raise ValueError(f"n must be a non-negative even integer, got {n}")
    if k < 0 or 2 * k > n // 2:
        raise ValueError(f"need 0 <= 2k <= n/2, got n={n}, k={k}")
    return Fraction(math.comb(n // 2, 2 * k) * 3**k, 4**k)


def kwis_expected_upper_bound_log2(n: int, k: int) -> float:
    """log2 of the same bound evaluated through lgamma, never forming the integers."""
    if n < 0 or n % 2 or k < 0 or 2 * k > n // 2:
        raise ValueError(f"infeasible n={n}, k={k}")
    h = n // 2
    ln_binom = math.lgamma(h + 1) - math.lgamma(2 * k + 1) - math.lgamma(h - 2 * k + 1)
    return ln_binom / math.log(2) + k * math.log2(0.75)


def log2_fraction(q: Fraction, prec: int = 120) -> float:
    with mpmath.workprec(prec):
        return float(mpmath.log(q.numerator, 2) - mpmath.log(q.denominator, 2))


# -- counting chain ---------------------------------------------------------


@dataclass(frozen=True)
class CountingChain:
    n: int
    c: Fraction
    k: int
    n_factorial: int
    s: int
    s_bound: Fraction
    balanced_total: int
    chain_expectation: Fraction
    expected_kwis: Fraction
    mean_ratio: Fraction | None
    obligation: bool

    @property
    def chain_holds(self) -> bool:
        return self.expected_kwis >= self.chain_expectation

    @property
    def certified(self) -> bool:
        """If the mean ratio is at most 1/2 + c the chain must certify expectation >= 1."""
        return not self.obligation or self.chain_expectation >= 1


class NonIntegralKError(ValueError):
    pass


def chain_k(n: int, c: Fraction) -> int:
    k = (Fraction(1, 2) - 3 * Fraction(c)) * n / 2
    if k < 0:
        raise ValueError(f"c={c} gives negative k; need c <= 1/6")
    if k.denominator != 1:
        raise NonIntegralKError(
            f"k = (1/2 - 3c) n/2 = {k} is not an integer for n={n}, c={c}; "
            f"replicate the instance {2 * k.denominator} times (gen replicate) to make it integral"
        )
    return int(k)


def lemma22_lower_bound(
    n: int,
    c: Fraction,
    aug3: Sequence[int] | Mapping[int, int],
    mean_ratio: Fraction | None = None,
) -> CountingChain:
    """Re-run the averaging argument on concrete per-order path counts ``a_i``.

    ``aug3`` is either the list of ``a_i`` or a histogram ``{a: multiplicity}``.
    The chain value is the smallest ``sum C(a_i, k)`` any split of ``s`` into
    ``N`` parts can give, i.e. the balanced split.
    """
    c = Fraction(c)
    k = chain_k(n, c)
    hist = dict(aug3) if isinstance(aug3, Mapping) else dict(Counter(aug3))
    total_perms = sum(hist.values())
    if total_perms < 1:
        raise ValueError("no per-permutation data")
    s = sum(a * cnt for a, cnt in hist.items())
    balanced = balanced_sum(s, total_perms, k)
    exact = Fraction(sum(cnt * math.comb(a, k) for a, cnt in hist.items()), total_perms)
    obligation = mean_ratio is not None and mean_ratio <= Fraction(1, 2) + c
    return CountingChain(
        n=n,
        c=c,
        k=k,
        n_factorial=total_perms,
        s=s,
        s_bound=total_perms * (Fraction(n, 4) - Fraction(3, 2) * n * c),
        balanced_total=balanced,
        chain_expectation=Fraction(balanced, total_perms),
        expected_kwis=exact,
        mean_ratio=mean_ratio,
        obligation=obligation,
    )


# -- entropy threshold ------------------------------------------------------


@dataclass(frozen=True)
class ThresholdReport:
    c: Fraction
    precision_bits: int
    f_of_c: str
    f_interval: tuple[str, str]
    verdict: str
    root_bracket: tuple[str, str]
    root_width: str


@contextmanager
def _iv_prec(bits: int):
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def _f_interval(c: Fraction):
    x = iv.mpf(6 * c.numerator) / c.denominator
    h = -x * iv.log(x) / iv.log(2) - (1 - x) * iv.log(1 - x) / iv.log(2)
    return h + iv.log(iv.mpf(3) / 4) / iv.log(2) * (iv.mpf(1) / 2 - 3 * iv.mpf(c.numerator) / c.denominator)


def threshold_f(c: Fraction, precision_bits: int = 128) -> mpmath.mpf:
    """``H(6c) + log2(3/4) (1/2 - 3c)`` at the given working precision."""
    c = Fraction(c)
    with mpmath.workprec(precision_bits):
        x = mpmath.mpf(6 * c.numerator) / c.denominator
        h = -x * mpmath.log(x, 2) - (1 - x) * mpmath.log(1 - x, 2)
        return +(h + mpmath.log(mpmath.mpf(3) / 4, 2) * (mpmath.mpf(1) / 2 - 3 * mpmath.mpf(c.numerator) / c.denominator))


def _sign(c: Fraction) -> int:
    f = _f_interval(c)
    if f.b < 0:
        return -1
    if f.a > 0:
        return 1
    return 0


def threshold_root(precision_bits: int = 128, tol: Fraction = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
    """Bisect for the sign change of the threshold function on (0.001, 0.01).

    Endpoints are exact rationals whose signs are certified by interval
    evaluation; bisection stops when the width is at most ``tol`` or the
    midpoint sign can no longer be certified.
    """
    lo, hi = ROOT_BRACKET
    with _iv_prec(precision_bits):
        if not (_sign(lo) < 0 < _sign(hi)):
            raise ArithmeticError("threshold function does not change sign on the bracket")
        while hi - lo > tol:
            mid = (lo + hi) / 2
            s = _sign(mid)
            if s == 0:
                break
            if s < 0:
                lo = mid
            else:
                hi = mid
    return lo, hi


def theorem_threshold(c: Fraction | str | float, precision_bits: int = 128) -> ThresholdReport:
    c = Fraction(c)
    if not 0 < c < Fraction(1, 6):
        raise ValueError(f"c must satisfy 0 < c < 1/6, got {c}")
    if not MIN_PRECISION_BITS <= precision_bits <= MAX_PRECISION_BITS:
        raise ValueError(
            f"precision_bits must be within [{MIN_PRECISION_BITS}, {MAX_PRECISION_BITS}], got {precision_bits}"
        )
    digits = int(precision_bits * math.log10(2)) - 2
    with _iv_prec(precision_bits):
        f_iv = _f_interval(c)
        sign = -1 if f_iv.b < 0 else (1 if f_iv.a > 0 else 0)
        interval = tuple(mpmath.nstr(mpmath.mpf(e), digits) for e in f_iv._mpi_)
    verdict = {-1: "negative", 1: "positive", 0: "indeterminate"}[sign]
    lo, hi = threshold_root(precision_bits)
    with mpmath.workprec(precision_bits):
        f_str = mpmath.nstr(threshold_f(c, precision_bits), digits)
        bracket = (mpmath.nstr(mpmath.mpf(lo.numerator) / lo.denominator, digits),
                   mpmath.nstr(mpmath.mpf(hi.numerator) / hi.denominator, digits))
        width = mpmath.nstr(mpmath.mpf((hi - lo).numerator) / (hi - lo).denominator, 6)
    return ThresholdReport(c, precision_bits, f_str, interval, verdict, bracket, width)
