"""Constellation constants and predicted prime distribution factors.

k(m) = z(m) * prod_{p > m+1} (1 - 1/(p - q + 1)^(m+1)), q the largest
prime <= m + 1, and the basic PDF is C(m) = 1/k(m).  A non-basic pattern
has PDF C(m) * prod (p - m - 1)/(p - m - 1 + g_p) over its collision
primes p > m + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ToleranceNotMet
from .patterns import Pattern, is_admissible, signature
from .sieve import is_prime, primes_up_to

DEFAULT_TRUNCATION = 10**7
MAX_TRUNCATION = 2 * 10**8


@dataclass(frozen=True)
class ProductValue:
    """A truncated Euler product: primes above ``truncation_prime`` are omitted
    and move the true value by at most ``tail_bound``."""

    value: float
    truncation_prime: int
    tail_bound: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "truncation_prime": self.truncation_prime,
            "tail_bound": self.tail_bound,
        }


def z_integer(m: int) -> int:
    """(m+1)(m-2)(m-5)... down to the last positive term."""
    if m < 1:
        raise ValueError(f"z(m) needs m >= 1, got {m}")
    return math.prod(range(m + 1, 0, -3))


def z_product(m: int) -> Fraction:
    """Product of 1/u over primes u <= m + 1 (empty product for m = 0)."""
    if m < 0:
        raise ValueError(f"Z(m) needs m >= 0, got {m}")
    return Fraction(1, math.prod(u for u in range(2, m + 2) if is_prime(u)))


def largest_prime_at_most(n: int) -> int:
    while not is_prime(n):
        n -= 1
    return n


def _log_tail(m: int, q: int, P: int) -> float:
    # sum_{p>P} -log(1 - 1/(p-q+1)^(m+1)) <= (1/(1-x0)) * int_P^inf du/(u-q)^(m+1),
    # x0 the largest omitted term
    x0 = 1.0 / (P + 2 - q) ** (m + 1)
    return 1.0 / (m * (P - q) ** m) / (1.0 - x0)


def _k_truncated(m: int, P: int) -> ProductValue:
    q = largest_prime_at_most(m + 1)
    primes = primes_up_to(P)
    ps = primes[primes > m + 1].astype(np.float64)
    log_prod = float(np.sum(np.log1p(-1.0 / (ps - q + 1) ** (m + 1))))
    value = z_integer(m) * math.exp(log_prod)
    tail = value * math.expm1(_log_tail(m, q, P))
    return ProductValue(value, P, tail)


def k_constant(
    m: int,
    P: int = DEFAULT_TRUNCATION,
    tolerance: float | None = None,
    extend: bool = False,
) -> ProductValue:
    """k(m) with the product cut at primes <= P.

    With ``tolerance`` set, a tail bound above it raises ToleranceNotMet,
    unless ``extend`` is on, in which case P is raised until it fits.
    """
    if m < 1:
        raise ValueError(f"k(m) needs m >= 1, got {m}")
    if P < m + 2:
        raise ValueError(f"truncation prime must be >= m+2 = {m + 2}, got {P}")
    result = _k_truncated(m, P)
    if tolerance is None:
        return result
    while extend and result.tail_bound > tolerance and P < MAX_TRUNCATION:
        P = min(4 * P, MAX_TRUNCATION)
        result = _k_truncated(m, P)
    if result.tail_bound > tolerance:
        raise ToleranceNotMet(
            f"k({m}) truncated at {P} has tail bound {result.tail_bound:.3g} > {tolerance:.3g}"
        )
    return result


def c_constant(
    m: int,
    P: int = DEFAULT_TRUNCATION,
    tolerance: float | None = None,
    extend: bool = False,
) -> ProductValue:
    """C(m) = 1/k(m), the limiting PDF of a basic m-plet."""
    k = k_constant(m, P, None if tolerance is None else tolerance, extend)
    # true k lies in [k e^-b, k], so C lies in [1/k, e^b / k]
    log_tail = math.log1p(k.tail_bound / k.value)
    return ProductValue(1.0 / k.value, k.truncation_prime, math.expm1(log_tail) / k.value)


def probability_ratio(m: int, p: int, g: int) -> Fraction:
    """K = (p - m - 1 + g) / (p - m - 1): frequency boost when g offsets collide mod p."""
    if p <= m + 1:
        raise ValueError(f"probability ratio needs p > m+1 = {m + 1}, got p={p}")
    if not 0 <= g <= m:
        raise ValueError(f"g must lie in [0, {m}], got {g}")
    return Fraction(p - m - 1 + g, p - m - 1)


def pdf_factor(pattern: Pattern) -> Fraction:
    """Exact f(pattern) / C(m) for an admissible pattern."""
    out = Fraction(1)
    for p, g in signature(pattern).collisions:
        out /= probability_ratio(pattern.m, p, g)
    return out


def predicted_pdf(pattern: Pattern, P: int = DEFAULT_TRUNCATION) -> ProductValue:
    """Predicted f for any pattern; +inf for inadmissible ones."""
    if not is_admissible(pattern):
        return ProductValue(math.inf, P, 0.0)
    c = c_constant(pattern.m, P)
    factor = float(pdf_factor(pattern))
    return ProductValue(c.value * factor, P, c.tail_bound * factor)


def pdf_ratio(pattern_a: Pattern, pattern_b: Pattern) -> Fraction:
    """Exact predicted f(a) / f(b); C(m) cancels."""
    if pattern_a.m != pattern_b.m:
        raise ValueError(f"patterns differ in length: m={pattern_a.m} vs m={pattern_b.m}")
    for pat in (pattern_a, pattern_b):
        if not is_admissible(pat):
            raise ValueError(f"pattern ({pat}) is not admissible")
    return pdf_factor(pattern_a) / pdf_factor(pattern_b)
