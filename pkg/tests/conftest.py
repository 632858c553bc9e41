import re
from collections import defaultdict

ROW = re.compile(r"test_acceptance\.py::test_c(\d+)_(\S+)")
_outcomes: dict[int, list[tuple[str, bool]]] = defaultdict(list)
_criteria: dict[int, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        if ROW.search(item.nodeid):
            _criteria.update(getattr(item.module, "CRITERIA", {}))
            break


def pytest_runtest_logreport(report):
    match = ROW.search(report.nodeid)
    if not match:
        return
    ok = report.passed or report.skipped
    if report.when == "call" or not ok:
        _outcomes[int(match.group(1))].append((match.group(2), ok))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_outcomes):
        rows = _outcomes[number]
        failed = [name for name, ok in rows if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {number:2d} {status}  {len(rows) - len(failed)}/{len(rows)} rows  {_criteria.get(number, '')}"
        if failed:
            line += "  failing: " + ", ".join(failed)
        tr.write_line(line)
