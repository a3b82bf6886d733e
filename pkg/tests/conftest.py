import itertools

import pytest

from meanders.core import Permutation, is_meander

_acceptance = {}


def dissipative_meanders(n):
    """All dissipative Jordan meanders on n vertices, by brute force."""
    for middle in itertools.permutations(range(2, n)):
        sigma = Permutation((1,) + middle + (n,))
        if is_meander(sigma):
            yield sigma


@pytest.fixture(scope="session")
def small_meanders():
    return [s for n in (3, 5, 7, 9) for s in dissipative_meanders(n)]


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid] = report.outcome
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.outcome != "passed":
        _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _acceptance.items():
        name = nodeid.split("[", 1)[-1].rstrip("]") if "[" in nodeid else nodeid.split("::")[-1]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
