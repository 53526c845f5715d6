import numpy as np
import pytest
from hypothesis import settings

from qfgur.families import fig2_family, gellmann_148, pauli_zx

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=100)
settings.load_profile("repo")

SQ2 = np.sqrt(2.0)
SQ5 = np.sqrt(5.0)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def qubit_set():
    return pauli_zx()


@pytest.fixture
def qutrit_set():
    return gellmann_148()


@pytest.fixture
def fig2():
    return fig2_family


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if name.startswith("test_criterion_"):
        num = int(name.split("_")[2])
        status = "PASS" if report.passed else "FAIL"
        detail = dict(report.user_properties).get("detail", "")
        ACCEPTANCE_LINES[num] = f"{status}  criterion {num:>2}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for num in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[num])
