import sys

import pytest

from relselect import _backend


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    """Run the test once per available core (compiled and pure Python)."""
    prev = _backend.name()
    _backend.use(request.param)
    yield request.param
    _backend.use(prev)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
