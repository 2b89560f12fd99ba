"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""
from collections import OrderedDict

_RESULTS: "OrderedDict[str, list]" = OrderedDict()


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    key = props.get("criterion")
    if key is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _RESULTS.setdefault(key, []).append((report.outcome, props.get("detail", ""), report.nodeid))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key, rows in sorted(_RESULTS.items(), key=lambda kv: int(kv[0].split()[0])):
        ok = all(outcome == "passed" for outcome, _, _ in rows)
        details = [d for outcome, d, _ in rows if d and (ok or outcome != "passed")]
        line = f"{'PASS' if ok else 'FAIL'}  {key}"
        if details:
            line += "  | " + "; ".join(details)
        terminalreporter.write_line(line)
