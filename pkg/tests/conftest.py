import numpy as np
import pytest

_ACCEPTANCE = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


@pytest.fixture
def record_criterion():
    """Record a one-line pass/fail result for the acceptance summary."""

    def record(number, label, passed, detail=""):
        _ACCEPTANCE.append((number, label, passed, detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, passed, detail in sorted(_ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {label} {detail}".rstrip())
