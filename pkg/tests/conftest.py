import pytest
from hypothesis import HealthCheck, settings

from nodeavg.cluster import build_base_graph, build_skeleton, random_lift

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def ct06():
    return build_base_graph(build_skeleton(0, 6))


@pytest.fixture(scope="session")
def ct110():
    return build_base_graph(build_skeleton(1, 10))


@pytest.fixture(scope="session")
def ct112():
    return build_base_graph(build_skeleton(1, 12))


@pytest.fixture(scope="session")
def lift110_q50(ct110):
    return random_lift(ct110, 50, 1)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
