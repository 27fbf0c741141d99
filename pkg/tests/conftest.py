"""Shared fixtures and the acceptance-line reporter.

Acceptance tests register one line each through the `acceptance` fixture;
the terminal summary hook prints them in criterion order so a plain pytest
run ends with one PASS/FAIL line per criterion.
"""

import pytest
from hypothesis import HealthCheck, settings

from searchlab.model import new_config

settings.register_profile(
    "suite",
    derandomize=True,
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

_ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Recorder: acceptance(num, name, ok, detail) stores the line and
    returns ok so the caller can assert on it."""

    def record(num: int, name: str, ok: bool, detail: str) -> bool:
        verdict = "PASS" if ok else "FAIL"
        _ACCEPTANCE_LINES[num] = f"ACCEPTANCE {num:2d} {name}: {verdict} - {detail}"
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(_ACCEPTANCE_LINES[num])


@pytest.fixture(scope="session")
def config16():
    """The reference configuration: B=16, delta=1, sigma2=0.25, eps=1e-4."""
    return new_config(16, 1, 0.25, 1e-4)
