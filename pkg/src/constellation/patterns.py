"""Multiplet shapes and their modular difference structure.

A pattern (a_1, ..., a_m) stands for the tuple p, p + a_1, ..., p + a_m.
For a prime p the offsets {0, a_1, ..., a_m} occupy ``nu`` distinct
residue classes; ``g = m + 1 - nu`` counts how many offsets collide with
another one mod p, which is the number of independent differences
a_i - a_j divisible by p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

from .sieve import is_prime


@dataclass(frozen=True, order=True)
class Pattern:
    offsets: tuple[int, ...]

    def __post_init__(self) -> None:
        offs = tuple(int(a) for a in self.offsets)
        if not offs:
            raise ValueError("pattern needs at least one offset")
        if offs[0] <= 0:
            raise ValueError(f"offsets must be positive, got {offs[0]}")
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise ValueError(f"offsets must be strictly increasing: {offs}")
        object.__setattr__(self, "offsets", offs)

    @classmethod
    def of(cls, *offsets: int) -> "Pattern":
        return cls(tuple(offsets))

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        """Parse "2,6,8"; a leading "0," (the base prime) is dropped."""
        tokens = [t.strip() for t in text.split(",")]
        values = []
        for tok in tokens:
            try:
                values.append(int(tok))
            except ValueError:
                raise ValueError(f"bad pattern token {tok!r} in {text!r}") from None
        if values and values[0] == 0:
            values = values[1:]
        return cls(tuple(values))

    @property
    def m(self) -> int:
        return len(self.offsets)

    @property
    def span(self) -> int:
        return self.offsets[-1]

    @property
    def members(self) -> tuple[int, ...]:
        """The offsets with the implicit leading 0."""
        return (0,) + self.offsets

    def differences(self) -> list[int]:
        pts = self.members
        return [pts[i] - pts[j] for i in range(len(pts)) for j in range(i)]

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.offsets)


@dataclass(frozen=True)
class ResidueProfile:
    p: int
    nu: int
    g: int


@dataclass(frozen=True)
class PatternSignature:
    m: int
    collisions: tuple[tuple[int, int], ...]


def factorize(a: int) -> list[tuple[int, int]]:
    """Prime factorization of a >= 1 by trial division."""
    if a < 1:
        raise ValueError(f"factorize needs a >= 1, got {a}")
    out = []
    d = 2
    while d * d <= a:
        if a % d == 0:
            e = 0
            while a % d == 0:
                a //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if a > 1:
        out.append((a, 1))
    return out


def difference_gcd(pattern: Pattern) -> int:
    return reduce(math.gcd, pattern.differences())


def residue_profile(pattern: Pattern, p: int) -> ResidueProfile:
    nu = len({a % p for a in pattern.members})
    return ResidueProfile(p, nu, pattern.m + 1 - nu)


def collision_primes(pattern: Pattern) -> list[ResidueProfile]:
    """Profiles of every prime dividing at least one pairwise difference."""
    primes: set[int] = set()
    for d in pattern.differences():
        primes.update(p for p, _ in factorize(d))
    return [residue_profile(pattern, p) for p in sorted(primes)]


def is_admissible(pattern: Pattern) -> bool:
    """False iff the offsets (with 0) cover every residue class of some prime.

    Only primes p <= m + 1 can be covered, so the check is finite.
    """
    for p in range(2, pattern.m + 2):
        if is_prime(p) and residue_profile(pattern, p).nu == p:
            return False
    return True


def signature(pattern: Pattern) -> PatternSignature:
    big = tuple(
        (prof.p, prof.g) for prof in collision_primes(pattern) if prof.p > pattern.m + 1
    )
    return PatternSignature(pattern.m, big)
