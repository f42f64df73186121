import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from dimerlab.fixtures import Fixture  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NAMES = ["conifold", "fig_ab_a", "fig_ab_b", "fig_ab_c", "fig_q"]
_cache: dict[str, Fixture] = {}


def fixture(name: str) -> Fixture:
    if name not in _cache:
        _cache[name] = Fixture.load(name)
    return _cache[name]


@pytest.fixture
def conifold():
    return fixture("conifold")


@pytest.fixture
def ab_a():
    return fixture("fig_ab_a")


@pytest.fixture
def ab_b():
    return fixture("fig_ab_b")


@pytest.fixture
def ab_c():
    return fixture("fig_ab_c")


@pytest.fixture
def figq():
    return fixture("fig_q")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in mod.REPORT:
            terminalreporter.write_line(line)
