"""Exact multiplet counts N(n, pattern) and the empirical PDF.

N(n, pattern) counts primes p <= n with every p + a_i prime; the
companions may lie beyond n, so the sieve runs to n + a_m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import UndefinedRatio
from .patterns import Pattern
from .sieve import DEFAULT_SEGMENT_SIZE, SievePlan, is_prime, sieve_stream


@dataclass(frozen=True)
class CountRecord:
    n: int
    pattern: Pattern
    count: int
    empirical_f: float
    naive_expected: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "pattern": str(self.pattern),
            "N": self.count,
            "f": self.empirical_f,
            "naive": self.naive_expected,
        }


def naive_expected(n: float, m: int) -> float:
    """n / ln(n)^(m+1): the count expected if primality were independent."""
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    return n / math.log(n) ** (m + 1)


def count_many(
    n: int,
    patterns: Iterable[Pattern],
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    thread_count: int = 1,
) -> dict[Pattern, int]:
    """Count several patterns at the same limit in a single sieve pass."""
    if n < 2:
        raise ValueError(f"count limit must be >= 2, got {n}")
    patterns = list(dict.fromkeys(patterns))
    totals = {pat: 0 for pat in patterns}

    # An odd offset forces one member to be even, so only p = 2 can work.
    even = []
    for pat in patterns:
        if any(a % 2 for a in pat.offsets):
            totals[pat] = int(all(is_prime(2 + a) for a in pat.offsets))
        else:
            even.append((pat, [a // 2 for a in pat.offsets]))
    if not even:
        return totals

    reach = max(halves[-1] for _, halves in even)
    plan = SievePlan(n + 2 * reach + 1, segment_size, thread_count)
    # global odd index i <-> number 2i + 1; odd p <= n  <=>  i < stop_all
    stop_all = (n + 1) // 2
    carry = np.zeros(0, dtype=bool)
    start = 1
    for block in sieve_stream(plan):
        assert block.first_odd_index == start + carry.size
        buf = np.concatenate([carry, block.odd]) if carry.size else block.odd
        stop = min(start + buf.size - reach, stop_all)
        if stop <= start:
            carry = buf
            continue
        width = stop - start
        for pat, halves in even:
            hit = buf[:width].copy()
            for h in halves:
                hit &= buf[h : h + width]
            totals[pat] += int(np.count_nonzero(hit))
        carry = buf[width:]
        start = stop
        if start >= stop_all:
            break
    return totals


def count_multiplets(
    n: int,
    pattern: Pattern,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    thread_count: int = 1,
) -> int:
    return count_many(n, [pattern], segment_size, thread_count)[pattern]


def pdf_from_count(n: int, m: int, count: int) -> float:
    if count == 0:
        return math.inf
    return n / (count * math.log(n) ** (m + 1))


def empirical_pdf(n: int, pattern: Pattern, count: int | None = None) -> float:
    """f = n / (N ln(n)^(m+1)), infinite when no multiplet occurs."""
    if n < 3:
        raise ValueError(f"empirical_pdf needs n >= 3, got {n}")
    if count is None:
        count = count_multiplets(n, pattern)
    return pdf_from_count(n, pattern.m, count)


def count_records(
    n: int,
    patterns: Sequence[Pattern],
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    thread_count: int = 1,
) -> list[CountRecord]:
    counts = count_many(n, patterns, segment_size, thread_count)
    return [
        CountRecord(n, pat, counts[pat], pdf_from_count(n, pat.m, counts[pat]), naive_expected(n, pat.m))
        for pat in patterns
    ]


def measure_ratio(n: int, pattern_a: Pattern, pattern_b: Pattern) -> float:
    """Measured f(a) / f(b), which at equal m and n is N(n, b) / N(n, a)."""
    if pattern_a.m != pattern_b.m:
        raise ValueError(f"patterns differ in length: m={pattern_a.m} vs m={pattern_b.m}")
    counts = count_many(n, [pattern_a, pattern_b])
    for pat in (pattern_a, pattern_b):
        if counts[pat] == 0:
            raise UndefinedRatio(f"no multiplets of shape ({pat}) up to {n}")
    return counts[pattern_b] / counts[pattern_a]
