import pytest

from qdsim.group import GroupSpec
from qdsim.lattice import build_lattice

MIXED = ["rough", "rough", "smooth", "smooth"]


def torus(n, rows=3, cols=3, lines=()):
    return build_lattice(GroupSpec((n,)), "torus", rows, cols, None, lines)


def disk(n, rows, cols, boundaries):
    return build_lattice(GroupSpec((n,)), "planar", rows, cols, boundaries)


def dislocated(n):
    """Smallest torus carrying a length-2 line; 12 qudits."""
    return torus(n, 2, 3, [(0, 1)])


@pytest.fixture
def lattices():
    return {"torus": torus, "disk": disk, "dislocated": dislocated, "mixed": MIXED}


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
