"""Logarithmic integrals, predicted counts, Mertens quantities and the
probabilistic sieve model with its correction factor r_m."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constants import (
    DEFAULT_TRUNCATION,
    ProductValue,
    k_constant,
    largest_prime_at_most,
    predicted_pdf,
    z_product,
)
from .patterns import Pattern, is_admissible
from .sieve import primes_up_to


@dataclass(frozen=True)
class Prediction:
    x: float
    pattern: Pattern
    k_value: ProductValue
    logint: float
    predicted_count: float
    predicted_f: float

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "pattern": str(self.pattern),
            "k": self.k_value.value,
            "logint": self.logint,
            "predicted_count": self.predicted_count,
            "predicted_f": self.predicted_f,
        }


@dataclass(frozen=True)
class MertensResult:
    x: int
    sum_minus_loglog: float
    product_times_log: float


def adaptive_simpson(
    f: Callable[[float], float], a: float, b: float, tol: float, max_depth: int = 50
) -> float:
    """Adaptive Simpson rule with Richardson correction; iterative, so deep
    refinement cannot hit the recursion limit."""
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    parts = []
    while stack:
        lo, hi, flo, fmid, fhi, est, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        fl = f(0.5 * (lo + mid))
        fr = f(0.5 * (mid + hi))
        left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi)
        delta = left + right - est
        if depth >= max_depth or abs(delta) <= 15.0 * eps:
            parts.append(left + right + delta / 15.0)
        else:
            stack.append((lo, mid, flo, fl, fmid, left, 0.5 * eps, depth + 1))
            stack.append((mid, hi, fmid, fr, fhi, right, 0.5 * eps, depth + 1))
    return math.fsum(parts)


def default_lower_limit(m: int) -> int:
    """m + 1, except that order 1 (m = 0) starts at 2 to avoid ln(1) = 0."""
    return max(m + 1, 2)


def log_integral(
    x: float,
    m: int,
    lower: float | None = None,
    abs_tol: float = 1e-8,
    rel_tol: float = 1e-13,
) -> float:
    """Integral of du / ln(u)^(m+1) from ``lower`` (default m + 1) to x.

    Accuracy is max(abs_tol, rel_tol * value): for large x the value runs
    to millions and an absolute 1e-8 is below double resolution.
    """
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    a = default_lower_limit(m) if lower is None else lower
    if a <= 1:
        raise ValueError(f"lower limit must exceed 1, got {a}")
    if x <= a:
        raise ValueError(f"log_integral needs x > {a}, got {x}")
    k = m + 1
    s0, s1 = math.log(a), math.log(x)
    # crude size estimate fixes the relative part of the tolerance
    scale = max(x / s1**k, (x - a) / s1**k)
    tol = max(abs_tol, rel_tol * scale)
    return adaptive_simpson(lambda s: math.exp(s) / s**k, s0, s1, tol)


def predicted_count(
    x: float,
    pattern: Pattern,
    P: int = DEFAULT_TRUNCATION,
    lower: float | None = None,
) -> Prediction:
    """Expected number of multiplets up to x: logint / predicted PDF.

    For a basic pattern this is k(m) times the logarithmic integral.
    """
    k = k_constant(pattern.m, P)
    logint = log_integral(x, pattern.m, lower)
    if not is_admissible(pattern):
        return Prediction(x, pattern, k, logint, 0.0, math.inf)
    f = predicted_pdf(pattern, P).value
    return Prediction(x, pattern, k, logint, logint / f, f)


def limit_check(x: float, m: int) -> float:
    """ln(x)^(m+1) / x times the logarithmic integral; tends to 1."""
    return math.log(x) ** (m + 1) / x * log_integral(x, m)


def mertens_sum(x: int) -> float:
    """sum_{p <= x} 1/p - ln ln x, which tends to B = 0.2615..."""
    if x < 3:
        raise ValueError(f"mertens_sum needs x >= 3, got {x}")
    primes = primes_up_to(x).astype(np.float64)
    return float(np.sum(1.0 / primes)) - math.log(math.log(x))


def mertens_product(x: int) -> float:
    """ln(x) * prod_{p <= x} (1 - 1/p), which tends to e^-gamma."""
    if x < 2:
        raise ValueError(f"mertens_product needs x >= 2, got {x}")
    primes = primes_up_to(x).astype(np.float64)
    return math.log(x) * math.exp(float(np.sum(np.log1p(-1.0 / primes))))


def mertens(x: int) -> MertensResult:
    return MertensResult(x, mertens_sum(x), mertens_product(x))


def h_function(x: int, m: int) -> float:
    """sum of ln(1 - (m+1)/q) over primes m+1 < q <= sqrt(x)."""
    if x < (m + 2) ** 2:
        raise ValueError(f"h_function needs x >= (m+2)^2 = {(m + 2) ** 2}, got {x}")
    primes = primes_up_to(math.isqrt(x))
    qs = primes[primes > m + 1].astype(np.float64)
    return float(np.sum(np.log1p(-(m + 1) / qs)))


def y_constant(x: int, m: int) -> float:
    """h + (m+1) ln ln sqrt(x); settles to a constant as x grows."""
    return h_function(x, m) + (m + 1) * math.log(0.5 * math.log(x))


def sieve_model(x: int, m: int) -> float:
    """Uncorrected sieve estimate x Z(m) prod_{m+1 < p <= sqrt x} (1 - (m+1)/p)."""
    return x * float(z_product(m)) * math.exp(h_function(x, m))


def r_factor(m: int, x: int, P_k: int = DEFAULT_TRUNCATION) -> float:
    """Correction r_m(x) = k(m) x / (ln(x)^(m+1) M(m)); for m = 0, k = 1."""
    k = 1.0 if m == 0 else k_constant(m, P_k).value
    return k * x / (math.log(x) ** (m + 1) * sieve_model(x, m))


def reciprocal_expansion(m: int, P: int, T: int) -> tuple[float, float]:
    """Compare prod (1 - (m+1)/p)^-1 with its expansion over smooth t <= T.

    Returns (lhs, rhs), where rhs sums (m+1)^l(t) / t over t whose prime
    factors all lie in (m+1, P] and l(t) counts them with multiplicity.
    """
    if P < m + 2:
        raise ValueError(f"P must be >= m+2 = {m + 2}, got {P}")
    if T < P:
        raise ValueError(f"T must be >= P = {P}, got {T}")
    ps = [int(p) for p in primes_up_to(P) if p > m + 1]
    lhs = math.prod(1.0 / (1.0 - (m + 1) / p) for p in ps)

    terms = []
    stack = [(0, 1, 1)]  # (smallest allowed prime index, t, (m+1)^l(t))
    while stack:
        i, t, w = stack.pop()
        terms.append(w / t)
        for j in range(i, len(ps)):
            nt = t * ps[j]
            if nt > T:
                break
            stack.append((j, nt, w * (m + 1)))
    return lhs, math.fsum(terms)


def prime_lower_limit(m: int) -> int:
    """Largest prime <= m + 1, the alternative integration start."""
    return largest_prime_at_most(max(m + 1, 2))
