"""Command-line front end.

    constellation count   --limit 5800079 --pattern 2 --pattern 2,6
    constellation pdf     --limit 5800079 --pattern 10,30 --baseline 2,6
    constellation predict --limit 15485863 --pattern 2,6,8,12
    constellation constants
    constellation verify  --suite fast

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 capacity.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from functools import wraps
from typing import Callable

import click

from .asymptotics import predicted_count, prime_lower_limit, r_factor
from .constants import DEFAULT_TRUNCATION, c_constant, k_constant, pdf_ratio, predicted_pdf, z_integer, z_product
from .counting import count_records
from .errors import CapacityError
from .patterns import Pattern, is_admissible
from .report import to_csv, to_json, write_atomic
from .sieve import DEFAULT_SEGMENT_SIZE, MIN_SEGMENT_SIZE
from .verify import SUITES, run_suite

EXIT_VERIFY_FAILED = 1
EXIT_CAPACITY = 3


@dataclass
class RunConfig:
    limit: int | None = None
    patterns: list[Pattern] = field(default_factory=list)
    segment_size: int = DEFAULT_SEGMENT_SIZE
    thread_count: int = 1
    truncation_prime: int = DEFAULT_TRUNCATION
    output_format: str = "json"
    output_path: str | None = None

    def require_patterns(self) -> None:
        if not self.patterns:
            raise click.UsageError("at least one --pattern is required")

    def require_limit(self, minimum: int) -> int:
        if self.limit is None:
            raise click.UsageError("--limit is required")
        if self.limit < minimum:
            raise click.BadParameter(f"must be >= {minimum}, got {self.limit}", param_hint="--limit")
        return self.limit


def _parse_patterns(ctx, param, values) -> list[Pattern]:
    out = []
    for text in values:
        try:
            out.append(Pattern.parse(text))
        except ValueError as exc:
            raise click.BadParameter(str(exc), ctx=ctx, param=param) from None
    return out


def common_options(fn: Callable) -> Callable:
    options = [
        click.option("--limit", type=int, help="Upper bound n (or x for predictions)."),
        click.option("--pattern", "patterns", multiple=True, callback=_parse_patterns, help='Offsets, e.g. "2,6,8". Repeatable.'),
        click.option("--truncation", type=click.IntRange(min=3), default=DEFAULT_TRUNCATION, show_default=True, help="Euler product cut-off prime."),
        click.option("--threads", type=click.IntRange(min=1), default=1, envvar="CONSTELLATION_THREADS", show_default=True),
        click.option("--segment-size", type=click.IntRange(min=MIN_SEGMENT_SIZE), default=DEFAULT_SEGMENT_SIZE, show_default=True),
        click.option("--format", "output_format", type=click.Choice(["json", "csv"]), default="json", show_default=True),
        click.option("--output", "output_path", type=click.Path(dir_okay=False), help="Write here (atomically) instead of stdout."),
    ]
    for opt in reversed(options):
        fn = opt(fn)

    @wraps(fn)
    def wrapper(limit, patterns, truncation, threads, segment_size, output_format, output_path, **kwargs):
        config = RunConfig(limit, list(patterns), segment_size, threads, truncation, output_format, output_path)
        try:
            return fn(config, **kwargs)
        except CapacityError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CAPACITY)

    return wrapper


def emit(config: RunConfig, rows: list[dict], payload=None) -> None:
    if config.output_format == "csv":
        text = to_csv(rows)
    else:
        text = to_json(rows if payload is None else payload)
    if config.output_path:
        write_atomic(config.output_path, text)
    else:
        click.echo(text, nl=False)


@click.group()
def main() -> None:
    """Prime multiplet counts, distribution factors and their predictions."""


@main.command()
@common_options
def count(config: RunConfig) -> None:
    """Count multiplets N(n, pattern) for each pattern."""
    n = config.require_limit(2)
    config.require_patterns()
    records = count_records(n, config.patterns, config.segment_size, config.thread_count)
    emit(config, [r.to_dict() for r in records])


@main.command()
@common_options
@click.option("--baseline", callback=lambda c, p, v: _parse_patterns(c, p, [v])[0] if v else None, help="Pattern to compare every row against.")
def pdf(config: RunConfig, baseline: Pattern | None) -> None:
    """Empirical versus predicted prime distribution factors."""
    n = config.require_limit(3)
    config.require_patterns()
    pats = list(config.patterns) + ([baseline] if baseline else [])
    records = {r.pattern: r for r in count_records(n, pats, config.segment_size, config.thread_count)}
    rows = []
    for pat in config.patterns:
        rec = records[pat]
        predicted = predicted_pdf(pat, config.truncation_prime).value
        row = {
            "n": n,
            "pattern": str(pat),
            "N": rec.count,
            "f": rec.empirical_f,
            "predicted_f": predicted,
            "f_over_predicted": rec.empirical_f / predicted if predicted != float("inf") else float("nan"),
            "admissible": is_admissible(pat),
        }
        if baseline is not None:
            base = records[baseline]
            row["baseline"] = str(baseline)
            row["measured_ratio"] = base.count / rec.count if rec.count and base.pattern.m == pat.m else float("nan")
            if base.pattern.m == pat.m and is_admissible(pat) and is_admissible(baseline):
                row["predicted_ratio"] = pdf_ratio(pat, baseline)
            else:
                row["predicted_ratio"] = None
        rows.append(row)
    emit(config, rows)


def _lower_limit(ctx, param, value):
    if value in (None, "m+1", "q"):
        return value
    try:
        return float(value)
    except ValueError:
        raise click.BadParameter(f'expected "m+1", "q" or a number, got {value!r}') from None


@main.command()
@common_options
@click.option("--lower-limit", default="m+1", callback=_lower_limit, show_default=True, help='Integration start: "m+1", "q" (largest prime <= m+1) or a number.')
def predict(config: RunConfig, lower_limit) -> None:
    """Predicted multiplet counts from the logarithmic integral."""
    x = config.require_limit(3)
    config.require_patterns()
    rows = []
    for pat in config.patterns:
        if lower_limit == "m+1":
            lower = None
        elif lower_limit == "q":
            lower = prime_lower_limit(pat.m)
        else:
            lower = lower_limit
        try:
            rows.append(predicted_count(x, pat, config.truncation_prime, lower).to_dict())
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--limit") from None
    emit(config, rows)


@main.command()
@common_options
@click.option("--m-max", type=click.IntRange(0, 6), default=6, show_default=True)
@click.option("--r-at", "r_x", type=int, default=10**10, show_default=True, help="x at which r_m is evaluated.")
def constants(config: RunConfig, m_max: int, r_x: int) -> None:
    """Table of z(m), Z(m), k(m), C(m) and r_m."""
    rows = []
    for m in range(0, m_max + 1):
        if m == 0:
            z, k, c = 1, (1.0, 0.0), (1.0, 0.0)
        else:
            z = z_integer(m)
            kv = k_constant(m, config.truncation_prime)
            cv = c_constant(m, config.truncation_prime)
            k, c = (kv.value, kv.tail_bound), (cv.value, cv.tail_bound)
        rows.append(
            {
                "m": m,
                "z": z,
                "Z": z_product(m),
                "k": k[0],
                "k_tail": k[1],
                "C": c[0],
                "C_tail": c[1],
                "r": r_factor(m, r_x, config.truncation_prime),
                "r_at": r_x,
            }
        )
    emit(config, rows)


@main.command()
@common_options
@click.option("--suite", type=click.Choice(SUITES), default="fast", show_default=True)
def verify(config: RunConfig, suite: str) -> None:
    """Recompute every published number and report pass/fail per row."""
    report = run_suite(suite, config.truncation_prime, config.segment_size, config.thread_count)
    emit(config, report.rows, report.to_dict())
    failed = [r["name"] for r in report.rows if not r["pass"]]
    if failed:
        click.echo(f"{len(failed)} of {len(report.rows)} checks failed: {', '.join(failed)}", err=True)
        sys.exit(EXIT_VERIFY_FAILED)


if __name__ == "__main__":
    main()
