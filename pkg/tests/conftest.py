import pytest

from softcomp import load_fixture


@pytest.fixture(scope="session")
def drone():
    return load_fixture("drone.json")


@pytest.fixture(scope="session")
def cas(drone):
    return drone.cas


@pytest.fixture(scope="session")
def a_e(drone):
    return drone.scas["e"]


@pytest.fixture(scope="session")
def a_s(drone):
    return drone.scas["s"]


@pytest.fixture(scope="session")
def a_es(drone):
    return drone.automaton("e_s")


@pytest.fixture(scope="session")
def caveat():
    return load_fixture("caveat.json")


# one line per acceptance criterion, filled in by tests/test_acceptance.py
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[number])
