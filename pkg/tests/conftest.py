"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

import pytest

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.stash[_RESULTS] = {}


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return report
    if report.when == "call" or (report.when == "setup" and not report.passed):
        number, title = marker.args
        details = [f"{k}={v}" for k, v in item.user_properties]
        item.config.stash[_RESULTS][number] = (title, report.passed, details)
    return report


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, passed, details = results[number]
        verdict = "PASS" if passed else "FAIL"
        line = f"criterion {number}: {verdict}  {title}"
        if details:
            line += "  [" + ", ".join(details) + "]"
        terminalreporter.write_line(line)
