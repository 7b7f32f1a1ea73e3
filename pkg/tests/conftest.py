import re

import pytest
from hypothesis import HealthCheck, settings

from modlat.conditions import check_all
from modlat.models import gl_instance

# deterministic property runs; the cache-isolation fixture is harmless to share across examples
settings.register_profile("modlat", derandomize=True, deadline=None,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("modlat")


@pytest.fixture(scope="session")
def f7():
    return gl_instance("F7", 2)


@pytest.fixture(scope="session")
def f2():
    return gl_instance("F2", 2)


@pytest.fixture(scope="session")
def f3():
    return gl_instance("F3", 2)


@pytest.fixture(scope="session")
def z4():
    return gl_instance("Z/4", 2)


@pytest.fixture(scope="session")
def z49():
    return gl_instance("Z/49", 2)


@pytest.fixture(scope="session")
def f7_reports(f7):
    return check_all(f7)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("MODLAT_CACHE", str(tmp_path / "cache"))


_CRITERION = re.compile(r"test_criterion_(\d+)")
_outcomes: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if m and (report.when == "call" or report.outcome != "passed"):
        _outcomes.setdefault(int(m.group(1)), []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_outcomes):
        ok = all(o == "passed" for o in _outcomes[k])
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}")
