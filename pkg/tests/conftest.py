import pytest
from hypothesis import HealthCheck, settings

from chfn.sampling import Sampler

settings.register_profile(
    "default", max_examples=30, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def sampler():
    return Sampler(seed=1234)


@pytest.fixture(scope="session")
def pairs():
    s = Sampler(seed=99)
    return [s.nonsingular_pair() for _ in range(8)]


_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


def pytest_runtest_logreport(report):
    marks = getattr(report, "criterion", None)
    if marks is None:
        return
    n, title = marks
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[n] = (title, report.outcome, report.duration)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = mark.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, outcome, duration = _criteria[n]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {title}  ({duration:.2f} s)")
