import pytest

from thetamix.constants import PhysicalConstants, derive_all

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion this test checks")


@pytest.fixture(scope="session")
def pc():
    return PhysicalConstants.default()


@pytest.fixture(scope="session")
def dc(pc):
    return derive_all(pc)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    crit = getattr(report, "_criterion", None)
    if crit is None:
        return
    n, title = crit
    entry = _criteria.setdefault(n, {"title": title, "ok": True})
    entry["ok"] = entry["ok"] and report.passed


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result()._criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        entry = _criteria[n]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {entry['title']}")
