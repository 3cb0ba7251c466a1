import pytest
from hypothesis import HealthCheck, settings

from univext.category import Indec, LinearA, Tube
from univext.torsion import TorsionPair, TubeCase1, TubeCase2, explicit_pair

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CASE1_WING = frozenset({Indec(1, 3), Indec(2, 2), Indec(3, 1)})
CASE2_WING = frozenset({Indec(3, 1)})


def case1_pair(cap=10, prime=101):
    return TorsionPair(Tube(5, cap, prime), TubeCase1((0, 4), (CASE1_WING, frozenset())))


def case2_pair(cap=10, prime=101):
    return TorsionPair(Tube(5, cap, prime), TubeCase2((0,), (CASE2_WING,)))


def iv(spec, a, b):
    return Indec(a, b - a + 1)


@pytest.fixture(scope="session")
def a3():
    return LinearA(3)


@pytest.fixture(scope="session")
def a3_pair(a3):
    return explicit_pair(a3, [Indec(2, 1)])


@pytest.fixture(scope="session")
def case1():
    return case1_pair()


@pytest.fixture(scope="session")
def case2():
    return case2_pair()


def pytest_terminal_summary(terminalreporter):
    acceptance = __import__("sys").modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])
