from __future__ import annotations

_acceptance: list[tuple[str, str, float]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::", 1)[1]
        _acceptance.append((name, "PASS" if report.passed else "FAIL", report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict, seconds in sorted(_acceptance):
        terminalreporter.write_line(f"{verdict}  {name}  ({seconds:.2f} s)")
