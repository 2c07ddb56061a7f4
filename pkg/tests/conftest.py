import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from htnipc import load_bundled  # noqa: E402
from htnipc.cli import bundled_suites  # noqa: E402

SUITES = bundled_suites()
LOGISTICS = SUITES / "logistics-mini"


@pytest.fixture(scope="session")
def logistics():
    return load_bundled("logistics-mini", "p01")


@pytest.fixture(scope="session")
def logistics_text():
    return (LOGISTICS / "domain.hddl").read_text(), (LOGISTICS / "p01.hddl").read_text()


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    # tests import this file as plain ``conftest``, which under importlib
    # mode is a different module object from the one pytest loaded
    lines = getattr(sys.modules.get("conftest"), "ACCEPTANCE", ACCEPTANCE)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
