"""Exact combinatorial coefficients of the potential's Taylor expansion.

The Taylor coefficient attached to a pair of index multisets (one for the
plain variables ``t_k``, one for the barred ``tbar_k``) is produced by a
layered recursion over compositions and ordered set partitions:

``bounded_compositions_count``
    counts compositions of an integer with per-slot upper bounds (a pure
    lattice count, computed by dynamic programming);
``t1_coefficient``
    averages those counts over all ways of grouping consecutive slots;
``t2_coefficient``
    contracts windows of an ``(s, l)`` column matrix down to the two-index
    base case;
``s_coefficient``
    sums factorial weights over ordered partitions of the barred index
    positions into labeled blocks with prescribed block sums;
``n1_coefficient`` / ``n2_coefficient``
    combine the two sides into the final signed sum.

All values are exact ``Fraction``s.  Every family is memoized in a
:class:`MemoCache`; computation of a key is deterministic and idempotent,
so concurrent get-or-compute races are harmless (CPython dict updates are
atomic and both writers store the same value).

Two variants of the window weight in the ``t2`` contraction are provided,
selected by the ``weight_rule`` argument:

* ``"linear"``    -- weight ``l`` (the window surplus itself);
* ``"multinomial"`` -- weight ``l! / prod((l_r - 1)!)`` over the window.

The variants agree whenever the contracted index list has length <= 3; they
first differ at length 4.  The package default is arbitrated by the ellipse
closed form (see ``potential.ellipse_oracle_check``) and by the bar-exchange
symmetry of the final coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterator

__all__ = [
    "SLMatrix",
    "NKey",
    "MemoCache",
    "DEFAULT_CACHE",
    "WEIGHT_RULE_LINEAR",
    "WEIGHT_RULE_MULTINOMIAL",
    "DEFAULT_WEIGHT_RULE",
    "bounded_compositions_count",
    "t1_coefficient",
    "t2_coefficient",
    "s_coefficient",
    "n1_coefficient",
    "n2_coefficient",
    "compositions",
    "bounded_partitions",
]

WEIGHT_RULE_LINEAR = "linear"
WEIGHT_RULE_MULTINOMIAL = "multinomial"
# Arbitrated default: the linear window weight reproduces the ellipse closed
# form at factor degree 7 (index-list length 4, where the variants first
# differ) and preserves bar-exchange symmetry; the multinomial variant flips
# the sign of such coefficients and breaks the symmetry.
DEFAULT_WEIGHT_RULE = WEIGHT_RULE_LINEAR


@dataclass(frozen=True)
class SLMatrix:
    """Paired composition columns ``(s_r, l_r)``, all entries >= 1."""

    s: tuple[int, ...]
    l: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.s) != len(self.l):
            raise ValueError("s and l must have equal length")
        if any(x < 1 for x in self.s) or any(x < 1 for x in self.l):
            raise ValueError("matrix entries must be >= 1")

    @property
    def width(self) -> int:
        return len(self.s)


@dataclass(frozen=True)
class NKey:
    """Canonical key for a potential coefficient.

    ``unbarred`` and ``barred`` are tuples of ``(index, multiplicity)`` pairs
    with strictly increasing indices; ``i`` is the weight of the unbarred
    side.  Keys whose barred weight differs from ``i`` are legal and map to
    the zero coefficient.
    """

    unbarred: tuple[tuple[int, int], ...]
    barred: tuple[tuple[int, int], ...]
    i: int

    def __post_init__(self) -> None:
        for side in (self.unbarred, self.barred):
            prev = 0
            for idx, mult in side:
                if idx <= prev or mult < 1:
                    raise ValueError(f"non-canonical key side {side}")
                prev = idx
        if self.i != sum(idx * m for idx, m in self.unbarred):
            raise ValueError("declared weight differs from unbarred weight")

    @classmethod
    def from_multisets(cls, unbarred, barred) -> "NKey":
        u = _fold(unbarred)
        b = _fold(barred)
        return cls(u, b, sum(idx * m for idx, m in u))

    def expanded_unbarred(self) -> tuple[int, ...]:
        return _expand(self.unbarred)

    def expanded_barred(self) -> tuple[int, ...]:
        return _expand(self.barred)

    def swapped(self) -> "NKey":
        return NKey(
            self.barred, self.unbarred, sum(idx * m for idx, m in self.barred)
        )


def _fold(values) -> tuple[tuple[int, int], ...]:
    counts: dict[int, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return tuple(sorted(counts.items()))


def _expand(side: tuple[tuple[int, int], ...]) -> tuple[int, ...]:
    out: list[int] = []
    for idx, mult in side:
        out.extend([idx] * mult)
    return tuple(out)


@dataclass
class MemoCache:
    """Per-family memo tables keyed by canonical argument tuples."""

    p: dict = field(default_factory=dict)
    t1: dict = field(default_factory=dict)
    t2: dict = field(default_factory=dict)
    s: dict = field(default_factory=dict)
    n1: dict = field(default_factory=dict)

    def clear(self) -> None:
        for d in (self.p, self.t1, self.t2, self.s, self.n1):
            d.clear()

    def sizes(self) -> dict[str, int]:
        return {
            "p": len(self.p),
            "t1": len(self.t1),
            "t2": len(self.t2),
            "s": len(self.s),
            "n1": len(self.n1),
        }


DEFAULT_CACHE = MemoCache()


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts < 1 or total < parts:
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def bounded_partitions(
    total: int, max_part: int, max_count: int
) -> Iterator[tuple[tuple[int, int], ...]]:
    """Multisets ``((index, mult), ...)`` with ``sum index*mult == total``.

    Indices are bounded by ``max_part`` and the total multiplicity by
    ``max_count``; output sides are in canonical (increasing index) order.
    """

    def rec(remaining: int, largest: int, budget: int):
        if remaining == 0:
            yield ()
            return
        if budget == 0:
            return
        for idx in range(min(largest, remaining), 0, -1):
            for mult in range(min(budget, remaining // idx), 0, -1):
                for rest in rec(remaining - idx * mult, idx - 1, budget - mult):
                    yield rest + ((idx, mult),)

    yield from rec(total, max_part, max_count)


def bounded_compositions_count(
    i: int, s: tuple[int, ...], j: int | None = None, cache: MemoCache = DEFAULT_CACHE
) -> int:
    """Number of tuples ``(i_1..i_m)`` with ``sum i_r = i``, ``1 <= i_r <= s_r - 1``.

    ``j`` is carried for key symmetry only; whenever ``i + j == sum(s)`` the
    count is the same whether computed from ``i`` or from ``j`` (replace each
    ``i_r`` by ``s_r - i_r``), so it never enters the computation.
    """
    s = tuple(s)
    key = (i, s)
    hit = cache.p.get(key)
    if hit is not None:
        return hit
    # ways[x] = number of prefixes summing to x
    ways = [0] * (i + 1)
    ways[0] = 1
    for bound in s:
        nxt = [0] * (i + 1)
        top = min(bound - 1, i)
        for x, w in enumerate(ways):
            if not w:
                continue
            for step in range(1, top + 1):
                if x + step > i:
                    break
                nxt[x + step] += w
        ways = nxt
    cache.p[key] = ways[i]
    return ways[i]


def t1_coefficient(
    i: int, j: int, s: tuple[int, ...], cache: MemoCache = DEFAULT_CACHE
) -> Fraction:
    """Average of bounded composition counts over consecutive groupings.

    Sums ``P(i, j, block sums) / (k * n_1! ... n_k!)`` over all ways of
    splitting the ``m`` slots of ``s`` into ``k`` consecutive blocks of sizes
    ``n_1..n_k``.  Callers maintain ``sum(s) == i + j``.
    """
    s = tuple(s)
    key = (i, j, s)
    hit = cache.t1.get(key)
    if hit is not None:
        return hit
    m = len(s)
    total = Fraction(0)
    for k in range(1, m + 1):
        for sizes in compositions(m, k):
            blocks = []
            pos = 0
            for n in sizes:
                blocks.append(sum(s[pos : pos + n]))
                pos += n
            count = bounded_compositions_count(i, tuple(blocks), j, cache)
            if count:
                denom = k
                for n in sizes:
                    denom *= factorial(n)
                total += Fraction(count, denom)
    cache.t1[key] = total
    return total


def _window_weight(l_window: tuple[int, ...], rule: str) -> int:
    surplus = sum(x - 1 for x in l_window)
    if rule == WEIGHT_RULE_LINEAR:
        return surplus
    if rule == WEIGHT_RULE_MULTINOMIAL:
        w = factorial(surplus)
        for x in l_window:
            w //= factorial(x - 1)
        return w
    raise ValueError(f"unknown weight rule {rule!r}")


def t2_coefficient(
    i_list: tuple[int, ...],
    sl: SLMatrix,
    weight_rule: str = DEFAULT_WEIGHT_RULE,
    cache: MemoCache = DEFAULT_CACHE,
) -> Fraction:
    """Window-contraction recursion over ``(s, l)`` columns.

    Base case (two indices): equals :func:`t1_coefficient` when every
    ``l_r == 1`` and vanishes otherwise.  Recursive case: sum over windows
    ``[a..b]`` of columns, each replaced by the single column
    ``(sum s - i_k, sum (l_r - 1))``, weighted by the window weight and by
    the ``t1`` value of the window against the last index.
    """
    i_list = tuple(i_list)
    if len(i_list) < 2:
        raise ValueError("need at least two indices")
    key = (i_list, sl.s, sl.l, weight_rule)
    hit = cache.t2.get(key)
    if hit is not None:
        return hit
    if len(i_list) == 2:
        if all(x == 1 for x in sl.l):
            value = t1_coefficient(i_list[0], i_list[1], sl.s, cache)
        else:
            value = Fraction(0)
    else:
        last = i_list[-1]
        m = sl.width
        value = Fraction(0)
        for a in range(m):
            s_acc = 0
            l_acc = 0
            for b in range(a, m):
                s_acc += sl.s[b]
                l_acc += sl.l[b] - 1
                s_new = s_acc - last
                if s_new < 1 or l_acc < 1:
                    continue
                weight = _window_weight(sl.l[a : b + 1], weight_rule)
                if not weight:
                    continue
                inner = t1_coefficient(s_new, last, sl.s[a : b + 1], cache)
                if not inner:
                    continue
                contracted = SLMatrix(
                    sl.s[:a] + (s_new,) + sl.s[b + 1 :],
                    sl.l[:a] + (l_acc,) + sl.l[b + 1 :],
                )
                tail = t2_coefficient(i_list[:-1], contracted, weight_rule, cache)
                if tail:
                    value += weight * inner * tail
    cache.t2[key] = value
    return value


def s_coefficient(
    barred: tuple[int, ...], sl: SLMatrix, cache: MemoCache = DEFAULT_CACHE
) -> int:
    """Ordered-set-partition sum over the barred index positions.

    Positions ``1..len(barred)`` are distributed into ``width`` labeled
    non-empty blocks; a distribution contributes only when block ``r`` has
    value sum ``s_r`` and ``s_r - n_r - l_r + 1 >= 0`` (``n_r`` the block
    size), with weight ``prod (s_r-1)! / ((s_r-n_r-l_r+1)! (l_r-1)!)``.
    Repeated values are distinguishable, so the result is an integer.
    """
    barred = tuple(sorted(barred))
    key = (barred, sl.s, sl.l)
    hit = cache.s.get(key)
    if hit is not None:
        return hit
    m = sl.width
    kbar = len(barred)
    if m > kbar or sum(barred) != sum(sl.s):
        cache.s[key] = 0
        return 0

    sums = [0] * m
    counts = [0] * m
    total = 0

    def place(pos: int) -> None:
        nonlocal total
        if pos == kbar:
            term = 1
            for r in range(m):
                n_r, l_r, s_r = counts[r], sl.l[r], sl.s[r]
                if n_r == 0 or sums[r] != s_r:
                    return
                slack = s_r - n_r - l_r + 1
                if slack < 0:
                    return
                term *= factorial(s_r - 1) // (factorial(slack) * factorial(l_r - 1))
            total += term
            return
        v = barred[pos]
        for r in range(m):
            if sums[r] + v <= sl.s[r]:
                sums[r] += v
                counts[r] += 1
                place(pos + 1)
                sums[r] -= v
                counts[r] -= 1

    place(0)
    cache.s[key] = total
    return total


def n1_coefficient(
    i: int,
    unbarred: tuple[int, ...],
    barred: tuple[int, ...],
    weight_rule: str = DEFAULT_WEIGHT_RULE,
    cache: MemoCache = DEFAULT_CACHE,
) -> Fraction:
    """Coefficient for expanded index lists.

    Vanishes unless both lists sum to ``i``.  Single-index sides reduce to
    the factorial base cases ``(i-1)! / (i-k+1)!``; otherwise the value is
    the alternating sum over column matrices of ``s`` and ``t2`` values.
    """
    unbarred = tuple(sorted(unbarred))
    barred = tuple(sorted(barred))
    if sum(unbarred) != i or sum(barred) != i:
        return Fraction(0)
    key = (unbarred, barred, weight_rule)
    hit = cache.n1.get(key)
    if hit is not None:
        return hit
    k = len(unbarred)
    kbar = len(barred)
    if k == 1:
        value = Fraction(factorial(i - 1), factorial(i - kbar + 1))
    elif kbar == 1:
        value = Fraction(factorial(i - 1), factorial(i - k + 1))
    else:
        value = Fraction(0)
        # Blocks are non-empty, so column matrices wider than the barred
        # list cannot be populated and the s factor kills them.
        for m in range(1, min(i, kbar) + 1):
            sign = 1 if m % 2 else -1
            for s_comp in compositions(i, m):
                for l_comp in compositions(m + k - 2, m):
                    sl = SLMatrix(s_comp, l_comp)
                    s_val = s_coefficient(barred, sl, cache)
                    if not s_val:
                        continue
                    t_val = t2_coefficient(unbarred, sl, weight_rule, cache)
                    if t_val:
                        value += sign * s_val * t_val
    cache.n1[key] = value
    return value


def n2_coefficient(
    key: NKey,
    weight_rule: str = DEFAULT_WEIGHT_RULE,
    cache: MemoCache = DEFAULT_CACHE,
) -> Fraction:
    """Coefficient for a canonical multiplicity key.

    Expands multiplicities into flat index lists and delegates to
    :func:`n1_coefficient`; zero when the two weights disagree.
    """
    if key.i != sum(idx * m for idx, m in key.barred):
        return Fraction(0)
    return n1_coefficient(
        key.i, key.expanded_unbarred(), key.expanded_barred(), weight_rule, cache
    )
