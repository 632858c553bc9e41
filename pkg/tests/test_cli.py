import csv
import io
import json
import math

import pytest
from click.testing import CliRunner

from constellation.cli import main
from constellation.report import to_json


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args, env=None):
    return runner.invoke(main, [str(a) for a in args], env=env, catch_exceptions=False)


def test_count_twins(runner):
    res = run(runner, "count", "--limit", 5800079, "--pattern", "2")
    assert res.exit_code == 0
    (row,) = json.loads(res.output)
    assert row["N"] == 36826
    assert row["pattern"] == "2"
    assert list(row) == ["n", "pattern", "N", "f", "naive"]


def test_count_multiple_patterns_and_leading_zero(runner):
    res = run(runner, "count", "--limit", 5800079, "--pattern", "2,6,8 ", "--pattern", "0,2,6")
    assert res.exit_code == 0
    assert [r["N"] for r in json.loads(res.output)] == [591, 5520]


def test_bad_token_exits_2(runner):
    res = runner.invoke(main, ["count", "--limit", "100", "--pattern", "2,x"])
    assert res.exit_code == 2
    assert "token 'x'" in res.output


def test_missing_pattern_exits_2(runner):
    res = runner.invoke(main, ["count", "--limit", "100"])
    assert res.exit_code == 2
    res = runner.invoke(main, ["pdf", "--limit", "100"])
    assert res.exit_code == 2


def test_missing_limit_exits_2(runner):
    assert runner.invoke(main, ["count", "--pattern", "2"]).exit_code == 2


def test_capacity_exits_3(runner):
    res = runner.invoke(main, ["count", "--limit", str(2**33), "--pattern", "2"])
    assert res.exit_code == 3
    assert "error" in res.output


def test_csv_output(runner):
    res = run(runner, "count", "--limit", 1000, "--pattern", "2", "--pattern", "4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(res.output)))
    assert res.output.splitlines()[0] == "n,pattern,N,f,naive"
    assert [r["N"] for r in rows] == ["35", "41"]


def test_json_round_trip_is_byte_identical(runner):
    res = run(runner, "pdf", "--limit", 100000, "--pattern", "2,6", "--pattern", "2,4", "--baseline", "2,6")
    assert to_json(json.loads(res.output)) == res.output


def test_six_significant_digits(runner):
    (row,) = json.loads(run(runner, "count", "--limit", 5800079, "--pattern", "2").output)
    n = 5800079
    assert row["f"] == float(f"{n / (36826 * math.log(n) ** 2):.6g}")
    assert len(repr(row["naive"]).replace(".", "").lstrip("0")) <= 6


def test_pdf_rows(runner):
    res = run(runner, "pdf", "--limit", 5800079, "--pattern", "10,30", "--pattern", "2,4", "--baseline", "2,6")
    first, inadmissible = json.loads(res.output)
    assert first["predicted_ratio"] == "1/2"
    assert first["measured_ratio"] == pytest.approx(0.5, rel=0.025)
    assert first["admissible"] is True
    assert inadmissible["admissible"] is False
    assert inadmissible["predicted_f"] == "inf"
    assert inadmissible["predicted_ratio"] is None


def test_pdf_infinite_for_zero_count(runner):
    (row,) = json.loads(run(runner, "pdf", "--limit", 3, "--pattern", "7").output)
    assert row["N"] == 0
    assert row["f"] == "inf"


def test_predict(runner):
    res = run(runner, "predict", "--limit", 15485863, "--pattern", "2,6,8,12")
    (row,) = json.loads(res.output)
    assert list(row) == ["x", "pattern", "k", "logint", "predicted_count", "predicted_f"]
    assert row["predicted_count"] == pytest.approx(191.36, rel=0.005)


def test_predict_prime_lower_limit(runner):
    res = run(runner, "predict", "--limit", 86028121, "--pattern", "2,6,8,12,18", "--lower-limit", "q")
    assert json.loads(res.output)[0]["predicted_count"] == pytest.approx(68.61, rel=1e-3)
    assert runner.invoke(main, ["predict", "--limit", "100", "--pattern", "2", "--lower-limit", "abc"]).exit_code == 2


def test_constants_table(runner):
    rows = json.loads(run(runner, "constants", "--m-max", 2, "--r-at", 10**8).output)
    assert [r["m"] for r in rows] == [0, 1, 2]
    assert rows[0]["k"] == rows[0]["C"] == 1
    assert rows[1]["k"] == pytest.approx(1.32032, abs=1e-4)
    assert rows[2]["C"] == pytest.approx(0.34997, abs=1e-3)
    assert rows[1]["Z"] == "1/2"


def test_output_file_is_written_atomically(runner, tmp_path):
    target = tmp_path / "out.json"
    target.write_text("stale")
    res = run(runner, "count", "--limit", 1000, "--pattern", "2", "--output", target)
    assert res.exit_code == 0 and res.output == ""
    assert json.loads(target.read_text())[0]["N"] == 35
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]


def test_thread_env_var(runner):
    a = run(runner, "count", "--limit", 2_000_000, "--pattern", "2,6", "--segment-size", 2**14)
    b = run(runner, "count", "--limit", 2_000_000, "--pattern", "2,6", "--segment-size", 2**14, env={"CONSTELLATION_THREADS": "3"})
    assert a.output == b.output
    bad = runner.invoke(main, ["count", "--limit", "100", "--pattern", "2"], env={"CONSTELLATION_THREADS": "0"})
    assert bad.exit_code == 2


def test_verify_fast_reports_every_row(runner, tmp_path):
    target = tmp_path / "verify.json"
    res = runner.invoke(main, ["verify", "--suite", "fast", "--output", str(target)])
    report = json.loads(target.read_text())
    assert report["metadata"]["suite"] == "fast"
    names = {r["name"]: r for r in report["checks"]}
    assert names["N(5800079; 2)"]["pass"]
    assert names["k(1)"]["pass"]
    assert set(report["checks"][0]) == {"name", "paper_value", "computed_value", "tolerance", "relative", "pass"}
    failed = [r["name"] for r in report["checks"] if not r["pass"]]
    assert res.exit_code == (1 if failed else 0)
    for name in failed:
        assert name in res.output
