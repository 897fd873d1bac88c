import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from needlets.model import NeedletWindow, PowerSpectrum

_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def window():
    return NeedletWindow()


@pytest.fixture(scope="session")
def spectrum():
    return PowerSpectrum(alpha=3.0, num_coeffs=(1.0,), den_coeffs=(1.0,))
