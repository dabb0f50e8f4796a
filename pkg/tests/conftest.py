import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from cutswap import _backend, parse_family

settings.register_profile("default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"

# rows R2, R3, R4, R5, R7 of the worked example, input indices 0..4
F5_TEXT = "b c d\nc d e f g h\nd e\ne f g h\nb h\n"
R2, R3, R4, R5, R7 = range(5)

BACKENDS = ["python"] + (["native"] if _backend.available() else [])


@pytest.fixture
def f5():
    return parse_family(F5_TEXT)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def names(f, parts):
    return ["".join(f.columns[c] for c in part) for part in parts]


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
