import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import bibnet  # noqa: E402
from bibnet.formats import read_affiliation, read_edge_list, read_matrix_csv  # noqa: E402

_criteria: dict[str, list] = {}


@pytest.fixture(scope="session")
def nrays():
    return read_edge_list(bibnet.fixture_path("nrays12.tsv"))


@pytest.fixture(scope="session")
def journals():
    return read_matrix_csv(bibnet.fixture_path("journals5.csv"))


@pytest.fixture(scope="session")
def authors():
    return read_affiliation(bibnet.fixture_path("authors.tsv"))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion this test certifies")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    crit = getattr(report, "criterion", None)
    if crit is not None:
        _criteria.setdefault(crit, []).append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = (marker.args[0], marker.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), results in sorted(_criteria.items()):
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"AC{num:02d} {status}  {title}")
