import pytest

from surfmc import CouplingSet, build_lattice, neighbor_table

ACCEPTANCE_LINES = []


def record(line):
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def model():
    cache = {}

    def get(L, J=(1.0,)):
        key = (L, tuple(J))
        if key not in cache:
            g = build_lattice(L)
            cache[key] = (g, neighbor_table(g, CouplingSet(tuple(J))))
        return cache[key]

    return get
