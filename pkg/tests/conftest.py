from pathlib import Path

import mpmath
import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture(autouse=True)
def _oracle_precision():
    # numeric oracles in tests/oracles.py run at the working precision
    with mpmath.workdps(110):
        yield


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        RESULTS = mod.RESULTS
        terminalreporter.write_sep("=", "acceptance criteria")
        for name in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[name])
