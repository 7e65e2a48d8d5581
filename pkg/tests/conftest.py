"""Prints one PASS/FAIL line per acceptance criterion after the run."""

_criteria: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _criteria.append((value, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for title, status in sorted(_criteria, key=lambda c: int(c[0].split(".")[0])):
        terminalreporter.write_line(f"{status}  criterion {title}")
