from pathlib import Path

import pytest

from loopkit.catalog import corpus

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def loops():
    return corpus()


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    from .gate import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
