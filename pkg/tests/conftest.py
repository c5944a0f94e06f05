import sys

import pytest

from hermden.density import DenContext
from hermden.localfield import FieldData


@pytest.fixture(scope="session")
def fields():
    return {case: FieldData.make(case, 3) for case in ("inert", "ramified", "split")}


@pytest.fixture(scope="session")
def ctx2(fields):
    """Contexts with ambient rank 2, one per case."""
    return {case: DenContext(fd, 2) for case, fd in fields.items()}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
