import pytest

from weyl_torsion.rootdata import make_root_datum

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def b3():
    return make_root_datum("B", 3)


@pytest.fixture(scope="session")
def b4():
    return make_root_datum("B", 4)


@pytest.fixture(scope="session")
def d4():
    return make_root_datum("D", 4)


@pytest.fixture
def acceptance_record():
    def record(number: int, title: str, passed: bool, detail: str = ""):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
