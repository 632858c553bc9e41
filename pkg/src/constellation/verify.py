"""The table of published numbers and the machinery to re-derive them.

Each row pairs a published value with a function that recomputes it and
a tolerance (absolute, or relative when ``relative`` is set).  Counts at a
given limit are shared between rows so each limit is sieved once.
"""

from __future__ import annotations

import math
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable

from .asymptotics import mertens_product, mertens_sum, predicted_count, r_factor
from .constants import DEFAULT_TRUNCATION, c_constant, k_constant, pdf_ratio
from .counting import count_many, pdf_from_count
from .patterns import Pattern
from .sieve import DEFAULT_SEGMENT_SIZE, nth_prime, prime_count

EULER_GAMMA = 0.577215  # as printed
SUITES = ("fast", "full")


class Session:
    """Shared state for one verification run (memoized counts)."""

    def __init__(
        self,
        wanted: dict[int, set[Pattern]] | None = None,
        truncation: int = DEFAULT_TRUNCATION,
        segment_size: int = DEFAULT_SEGMENT_SIZE,
        thread_count: int = 1,
    ):
        self.wanted = defaultdict(set, wanted or {})
        self.truncation = truncation
        self.segment_size = segment_size
        self.thread_count = thread_count
        self._counts: dict[tuple[int, Pattern], int] = {}

    def count(self, n: int, pattern: Pattern) -> int:
        if (n, pattern) not in self._counts:
            batch = sorted(self.wanted[n] | {pattern})
            got = count_many(n, batch, self.segment_size, self.thread_count)
            self._counts.update({(n, p): c for p, c in got.items()})
        return self._counts[(n, pattern)]

    def pdf(self, n: int, pattern: Pattern) -> float:
        return pdf_from_count(n, pattern.m, self.count(n, pattern))


@dataclass(frozen=True)
class Check:
    name: str
    paper_value: float
    tolerance: float
    relative: bool
    suite: str
    compute: Callable[[Session], float]
    needs: tuple[tuple[int, Pattern], ...] = ()

    def passes(self, computed: float) -> bool:
        err = abs(computed - self.paper_value)
        if self.relative:
            err /= abs(self.paper_value)
        return err <= self.tolerance


@dataclass
class VerificationReport:
    rows: list[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.rows)

    def to_dict(self) -> dict:
        return {"metadata": self.metadata, "checks": self.rows}


def _pat(offsets) -> Pattern:
    return Pattern(tuple(offsets))


def _count_row(n, offsets, published, suite, tol=2) -> Check:
    pat = _pat(offsets)
    return Check(f"N({n}; {pat})", published, tol, False, suite, lambda s: s.count(n, pat), ((n, pat),))


def _pdf_row(n, offsets, published, tol, suite="fast") -> Check:
    pat = _pat(offsets)
    return Check(f"f({n}; {pat})", published, tol, False, suite, lambda s: s.pdf(n, pat), ((n, pat),))


def _predict_row(x, offsets, published, suite, tol=0.005) -> Check:
    pat = _pat(offsets)
    return Check(
        f"predicted N({x}; {pat})",
        published,
        tol,
        True,
        suite,
        lambda s: predicted_count(x, pat, s.truncation).predicted_count,
    )


def _ratio_row(n, a, b, label=None) -> Check:
    pa, pb = _pat(a), _pat(b)
    expected = pdf_ratio(pa, pb)
    return Check(
        f"f({label or pa})/f({pb}) at {n} vs {expected}",
        float(expected),
        0.025,
        True,
        "fast",
        lambda s: s.count(n, pb) / s.count(n, pa),
        ((n, pa), (n, pb)),
    )


def _r_stability_row(m) -> Check:
    return Check(
        f"|r_{m}(1e8) - r_{m}(1e10)|",
        0.0,
        0.005,
        False,
        "fast",
        lambda s: abs(r_factor(m, 10**8, s.truncation) - r_factor(m, 10**10, s.truncation)),
    )


N1, N2, N3, N5, N10 = 5800079, 15485863, 32452843, 86028121, 179424673


def published_checks() -> list[Check]:
    rows = [
        Check("pi(5800079)", 400000, 0, False, "fast", lambda s: prime_count(N1)),
        Check("p_400000", N1, 0, False, "fast", lambda s: nth_prime(400000)),
    ]
    for a, n_pairs in [(2, 36826), (4, 36707), (6, 73187), (12, 73449), (14, 43993), (30, 97825)]:
        rows.append(_count_row(N1, (a,), n_pairs, "fast"))
    for a, f in [(2, 0.6494), (6, 0.32676), (14, 0.543606), (30, 0.244466)]:
        rows.append(_pdf_row(N1, (a,), f, 0.0005))
    for offs, f in [((2, 6), 0.278193), ((2, 12), 0.182965), ((2, 14), 0.222554), ((6, 70), 0.14695)]:
        rows.append(_pdf_row(N1, offs, f, 0.001))

    tuples = {
        (2, 6): [(N1, 5520), (N2, 12092), (N3, 21953)],
        (2, 6, 8): [(N1, 591), (N2, 1229), (N3, 2052)],
        (2, 6, 8, 12): [(N1, 109), (N2, 205), (N10, 336)],
        (2, 6, 8, 12, 18): [(N1, 15), (N2, 20), (N5, 57)],
    }
    for offs, pts in tuples.items():
        for n, c in pts:
            rows.append(_count_row(n, offs, c, "fast" if n <= N1 else "full"))
    rows.append(_count_row(10**9, (2,), 3424506, "full", tol=0))

    rows += [
        Check("k(1)", 1.32032, 1e-4, False, "fast", lambda s: k_constant(1, s.truncation).value),
        Check("C(1)", 0.757392, 1e-4, False, "fast", lambda s: c_constant(1, s.truncation).value),
        Check("C(2)", 0.34997, 1e-3, False, "fast", lambda s: c_constant(2, s.truncation).value),
    ]

    predictions = {
        (2, 6): [(N1, 5580), (N2, 12170), (N3, 22099)],
        (2, 6, 8): [(N1, 551.54)],
        (2, 6, 8, 12): [(N1, 103), (N2, 191.36), (N10, 311.6)],
        (2, 6, 8, 12, 18): [(N1, 16.09), (N2, 25.99), (N5, 68.61)],
    }
    for offs, pts in predictions.items():
        for x, v in pts:
            rows.append(_predict_row(x, offs, v, "fast" if x <= N1 else "full"))
    rows.append(_predict_row(10**9, (2,), 3425230, "full", tol=0.001))

    rows += [
        _ratio_row(N1, (6,), (2,)),
        _ratio_row(N1, (14,), (2,)),
        _ratio_row(N1, (30,), (2,)),
        _ratio_row(N1, (2, 12), (2, 6)),
        _ratio_row(N1, (10, 30), (2, 6)),
    ]

    rows += [
        Check("r_0(1e10)", math.exp(EULER_GAMMA) / 2, 0.002, False, "fast", lambda s: r_factor(0, 10**10)),
        Check("r_1(1e10)", 0.7931, 0.005, False, "fast", lambda s: r_factor(1, 10**10, s.truncation)),
        Check("r_2(1e10)", 0.7060, 0.005, False, "fast", lambda s: r_factor(2, 10**10, s.truncation)),
        _r_stability_row(0),
        _r_stability_row(1),
        _r_stability_row(2),
        Check("B from sum 1/p (1e8)", 0.2616, 0.005, False, "fast", lambda s: mertens_sum(10**8)),
        Check(
            "e^-gamma from prod (1e8)",
            math.exp(-EULER_GAMMA),
            0.003,
            False,
            "fast",
            lambda s: mertens_product(10**8),
        ),
    ]
    return rows


def run_suite(
    suite: str = "fast",
    truncation: int = DEFAULT_TRUNCATION,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    thread_count: int = 1,
) -> VerificationReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    checks = [c for c in published_checks() if suite == "full" or c.suite == "fast"]
    wanted: dict[int, set[Pattern]] = defaultdict(set)
    for c in checks:
        for n, pat in c.needs:
            wanted[n].add(pat)
    session = Session(wanted, truncation, segment_size, thread_count)

    started = time.perf_counter()
    report = VerificationReport()
    for c in checks:
        value = float(c.compute(session))
        report.rows.append(
            {
                "name": c.name,
                "paper_value": c.paper_value,
                "computed_value": value,
                "tolerance": c.tolerance,
                "relative": c.relative,
                "pass": c.passes(value),
            }
        )
    report.metadata = {
        "suite": suite,
        "limit": max(wanted) if wanted else None,
        "truncation": truncation,
        "wall_time": time.perf_counter() - started,
    }
    return report
