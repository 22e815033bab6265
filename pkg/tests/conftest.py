"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    number, title = mark.args
    details = [str(v) for k, v in item.user_properties if k == "detail"]
    _RESULTS[number] = (title, rep.passed, rep.duration, details)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, passed, duration, details = _RESULTS[number]
        tr.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}  ({duration:.2f}s)")
        for d in details:
            tr.write_line(f"    {d}")
    failed = sum(not r[1] for r in _RESULTS.values())
    tr.write_line(f"{len(_RESULTS) - failed}/{len(_RESULTS)} criteria passed")
