import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sptrack import _backend  # noqa: E402

_RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    """Remember one acceptance line; printed now and in the terminal summary."""
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    _RESULTS[n] = line
    print(line)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance")
    for n in sorted(_RESULTS):
        terminalreporter.write_line(_RESULTS[n])


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    """Run a test once per available kernel backend."""
    old = _backend.name
    _backend.use(request.param)
    yield request.param
    _backend.use(old)
