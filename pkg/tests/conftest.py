import numpy as np
import pytest

from vvc_itx.kernel_store import default_bank

_CRITERIA: dict[str, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def bank():
    return default_bank()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _CRITERIA[name] = (report.outcome, report.longreprtext.splitlines()[-1] if report.failed else "")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        outcome, why = _CRITERIA[name]
        tag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{tag}  {name}" + (f"  ({why})" if why else ""))
