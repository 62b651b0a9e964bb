import pytest
from hypothesis import HealthCheck, settings

from implicative.workspace import load_zoo

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def zoo():
    return load_zoo()


def alg(name):
    return load_zoo().algebra(name)


SMALL = ["C2", "C3", "C4", "B4", "N5", "M3", "R1", "R2", "REL", "NEST", "MOD", "POW"]
ZOO = SMALL[:4] + ["B8"] + SMALL[4:8] + ["R3"] + SMALL[8:]
HEYTING = ["C2", "C3", "C4", "B4", "B8"]
BOOLEAN = ["C2", "B4", "B8"]


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
