import numpy as np
import pytest

from meroclass.explore import random_spec

N_RANDOM_SPECS = 100


@pytest.fixture(scope="session")
def random_specs():
    """The seeded batch of 100 construction specs shared by the property and
    acceptance tests."""
    rng = np.random.default_rng(20240611)
    return [random_spec(rng) for _ in range(N_RANDOM_SPECS)]


_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for mark in getattr(report, "criterion", ()):
        _criteria[mark] = "PASS" if report.passed else "FAIL"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marks = [m.args for m in item.iter_markers("criterion")]
    rep.criterion = [f"criterion {n:>2}: {text}" for n, text in marks]



def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(f"[{_criteria[key]}] {key}")
