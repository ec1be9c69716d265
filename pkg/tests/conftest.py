import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(number, title): acceptance criterion covered by this test",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and report.when in ("setup", "call"):
        report.criterion = (marker.args[0], marker.args[1], report.when)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = {}
    for reports in terminalreporter.stats.values():
        for report in reports:
            info = getattr(report, "criterion", None)
            if info is None:
                continue
            number, title, when = info
            if when == "setup" and report.outcome == "passed":
                continue  # wait for the call-phase report
            outcome = {"passed": "PASS", "failed": "FAIL"}.get(report.outcome, "SKIP")
            # a later FAIL overrides an earlier PASS for parametrised criteria
            if rows.get(number, (None, "PASS"))[1] != "FAIL":
                rows[number] = (title, outcome)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(rows):
        title, outcome = rows[number]
        terminalreporter.write_line(f"criterion {number:2d} {outcome:4s} {title}")
