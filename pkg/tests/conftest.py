import pytest

from afpoly import hexmodel, parse_system

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def catalogue():
    """All systems with up to 7 hexagons, generated once."""
    return hexmodel.generate_all(7)


@pytest.fixture(scope="session")
def upto():
    systems = hexmodel.generate_all(7)

    def select(h_max):
        return [h for h in systems if len(h) <= h_max]

    return select


@pytest.fixture
def benzene():
    return parse_system("H{}")


@pytest.fixture
def naphthalene():
    return parse_system("H{0{}}")


@pytest.fixture
def anthracene():
    return parse_system("C:S")


@pytest.fixture
def phenanthrene():
    return parse_system("C:L")


@pytest.fixture
def triphenylene():
    return parse_system("H{0{}2{}4{}}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
