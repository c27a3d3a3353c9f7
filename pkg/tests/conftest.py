import pytest
from hypothesis import HealthCheck, settings

from armspace import RobotArm
from armspace.suite import DESK_SUITE, named_graph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def graphs():
    return {name: named_graph(name) for name in DESK_SUITE}


@pytest.fixture(scope="session")
def paw_graph():
    return named_graph("paw")[0]


@pytest.fixture(scope="session")
def arm_of():
    cache = {}

    def make(name: str, length: int) -> RobotArm:
        key = (name, length)
        if key not in cache:
            g, b = named_graph(name)
            cache[key] = RobotArm(g, b, length)
        return cache[key]

    return make
