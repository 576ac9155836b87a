import os

import pytest
from hypothesis import HealthCheck, settings

from vhss.params import toy_params
from vhss.sampling import RngHandle
from vhss.scheme import vhss_gen

settings.register_profile("default", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    line = f"criterion {number} [{status}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return RngHandle.from_string("test-suite")


@pytest.fixture(scope="module")
def toy():
    return toy_params()


@pytest.fixture(scope="module")
def toy_keys(toy):
    return vhss_gen(toy, RngHandle.from_string("toy-keys"))
