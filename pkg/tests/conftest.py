import random

import pytest
from hypothesis import HealthCheck, settings

from idealorbit.domains import QQ
from idealorbit.polynomial import PolyRing

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    """Run a criterion body and log one PASS/FAIL line for the summary."""

    def record(number, title, body):
        try:
            detail = body()
        except BaseException as exc:
            ACCEPTANCE_LINES.append(f"FAIL  criterion {number}: {title} ({type(exc).__name__}: {exc})")
            raise
        suffix = f" ({detail})" if detail else ""
        ACCEPTANCE_LINES.append(f"PASS  criterion {number}: {title}{suffix}")
        print(ACCEPTANCE_LINES[-1])

    return record


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def qxy():
    return PolyRing(QQ, ("x", "y"))
