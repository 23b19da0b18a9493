import numpy as np
import pytest

from bcsketch import SparseBinaryVector

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _ACCEPTANCE.items():
        name = nodeid.split("::")[-1]
        verdict = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[outcome]
        terminalreporter.write_line(f"{verdict:<5} {name}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_vector(rng, dim, max_weight=None):
    """Uniform random subset of {1..dim} with weight in [0, max_weight]."""
    max_weight = dim if max_weight is None else min(max_weight, dim)
    w = int(rng.integers(0, max_weight, endpoint=True))
    return SparseBinaryVector(dim, np.sort(rng.choice(dim, size=w, replace=False)) + 1)
