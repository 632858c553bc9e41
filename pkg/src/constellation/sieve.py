"""Segmented, odd-only sieve of Eratosthenes.

Every block stores one byte per odd number in its range, so a block's
``odd`` array answers "is lo + 2j + 1 prime?" at index j.  Segments are
sieved independently (optionally on a thread pool) and always handed to
the consumer in ascending order.
"""

from __future__ import annotations

import math
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import CapacityError

DEFAULT_SEGMENT_SIZE = 256 * 1024
MIN_SEGMENT_SIZE = 2**14
MAX_LIMIT = 2**32


def default_threads() -> int:
    raw = os.environ.get("CONSTELLATION_THREADS")
    if raw:
        return max(1, int(raw))
    return 1


@dataclass(frozen=True)
class SievePlan:
    """What to sieve and how: the half-open range [2, limit)."""

    limit: int
    segment_size: int = DEFAULT_SEGMENT_SIZE
    thread_count: int = 1

    def __post_init__(self) -> None:
        if self.limit < 2:
            raise ValueError(f"sieve limit must be >= 2, got {self.limit}")
        if self.limit > MAX_LIMIT:
            raise CapacityError(f"sieve limit {self.limit} exceeds supported maximum {MAX_LIMIT}")
        if self.segment_size < MIN_SEGMENT_SIZE:
            raise ValueError(f"segment_size must be >= {MIN_SEGMENT_SIZE}, got {self.segment_size}")
        if self.thread_count < 1:
            raise ValueError(f"thread_count must be >= 1, got {self.thread_count}")


@dataclass(frozen=True, eq=False)
class PrimeBlock:
    """Primality of every integer in [lo, hi).

    ``lo`` is always even (the first block starts at 2), and ``odd[j]`` is
    the primality of ``lo + 2*j + 1``.  The array is read-only.
    """

    lo: int
    hi: int
    odd: np.ndarray

    @property
    def bits(self) -> np.ndarray:
        """Full bitmap: ``bits[i]`` is True iff ``lo + i`` is prime."""
        out = np.zeros(self.hi - self.lo, dtype=bool)
        out[1::2] = self.odd
        if self.lo == 2:
            out[0] = True
        return out

    @property
    def first_odd_index(self) -> int:
        """Index of ``lo + 1`` in the global odd numbering u -> u // 2."""
        return self.lo // 2

    def primes(self) -> np.ndarray:
        found = self.lo + 1 + 2 * np.flatnonzero(self.odd).astype(np.int64)
        if self.lo == 2:
            found = np.concatenate([np.array([2], dtype=np.int64), found])
        return found

    def count(self) -> int:
        return int(np.count_nonzero(self.odd)) + (self.lo == 2)


def _odd_primes_through(n: int) -> np.ndarray:
    """Odd primes <= n with a plain (unsegmented) odd-only sieve."""
    if n < 3:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones((n + 1) // 2, dtype=bool)  # flags[i] <-> 2i + 1
    flags[0] = False
    for i in range(1, (math.isqrt(n) - 1) // 2 + 1):
        if flags[i]:
            p = 2 * i + 1
            flags[p * p // 2 :: p] = False
    return 2 * np.flatnonzero(flags).astype(np.int64) + 1


def _sieve_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    first = lo + 1
    odd = np.ones((hi - lo) // 2, dtype=bool)
    ps = base[: np.searchsorted(base, math.isqrt(hi - 1), side="right")]
    if ps.size:
        start = np.maximum(ps * ps, -(-first // ps) * ps)
        start += ps * (start % 2 == 0)
        offsets = (start - first) // 2
        for p, i in zip(ps.tolist(), offsets.tolist()):
            odd[i::p] = False
    odd.flags.writeable = False
    return odd


def _segment_bounds(plan: SievePlan) -> list[tuple[int, int]]:
    span = 2 * plan.segment_size
    bounds = []
    lo = 2
    while lo < plan.limit:
        hi = min((lo // span + 1) * span, plan.limit)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def sieve_stream(plan: SievePlan) -> Iterator[PrimeBlock]:
    """Yield contiguous blocks covering [2, plan.limit) in ascending order."""
    base = _odd_primes_through(math.isqrt(max(plan.limit - 1, 0)))
    bounds = _segment_bounds(plan)
    if plan.thread_count == 1:
        for lo, hi in bounds:
            yield PrimeBlock(lo, hi, _sieve_segment(lo, hi, base))
        return

    depth = 2 * plan.thread_count
    with ThreadPoolExecutor(max_workers=plan.thread_count) as pool:
        pending: deque = deque()
        todo = iter(bounds)
        for lo, hi in todo:
            pending.append((lo, hi, pool.submit(_sieve_segment, lo, hi, base)))
            if len(pending) >= depth:
                break
        while pending:
            lo, hi, fut = pending.popleft()
            nxt = next(todo, None)
            if nxt is not None:
                pending.append((*nxt, pool.submit(_sieve_segment, *nxt, base)))
            yield PrimeBlock(lo, hi, fut.result())


@lru_cache(maxsize=8)
def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as a read-only int64 array (cached)."""
    if n < 2:
        out = np.zeros(0, dtype=np.int64)
    else:
        out = np.concatenate([b.primes() for b in sieve_stream(SievePlan(n + 1))])
    out.flags.writeable = False
    return out


def prime_count(n: int, segment_size: int = DEFAULT_SEGMENT_SIZE, thread_count: int = 1) -> int:
    """Exact pi(n)."""
    if n < 2:
        raise ValueError(f"prime_count needs n >= 2, got {n}")
    plan = SievePlan(n + 1, segment_size, thread_count)
    return sum(block.count() for block in sieve_stream(plan))


def _nth_prime_bound(k: int) -> int:
    # Rosser's bound p_k < k (ln k + ln ln k) for k >= 6
    if k < 6:
        return 13
    return int(k * (math.log(k) + math.log(math.log(k)))) + 1


def nth_prime(k: int) -> int:
    """The k-th prime, counting 2 as the first."""
    if k < 1:
        raise ValueError(f"nth_prime needs k >= 1, got {k}")
    seen = 0
    for block in sieve_stream(SievePlan(_nth_prime_bound(k) + 1)):
        c = block.count()
        if seen + c >= k:
            return int(block.primes()[k - seen - 1])
        seen += c
    raise AssertionError("prime bound too small")  # unreachable by Rosser's theorem


def is_prime(u: int) -> bool:
    """Deterministic primality by trial division (test oracle, small u)."""
    if u < 2:
        return False
    if u < 4:
        return True
    if u % 2 == 0 or u % 3 == 0:
        return False
    d = 5
    while d * d <= u:
        if u % d == 0 or u % (d + 2) == 0:
            return False
        d += 6
    return True
