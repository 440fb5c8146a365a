import pytest
from hypothesis import settings

from helpers import db

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def table1_db():
    # a=0 ... g=6; g never occurs but is negated by one of the patterns
    return db("(bc) f a", "(bc) (cf) a", "(bc) (df) a", "(bc) (ef) a", "(bc) (cdef) a")


@pytest.fixture
def table2_db():
    return db("a c b e d", "a (bc) e", "a b e d", "a e d f")


@pytest.fixture
def absence_db():
    return db("a c b e d", "a (bc) e d", "a b e d", "a e d")


GATE_LINES = []


@pytest.fixture
def gate(capsys):
    """Record one acceptance line: ``gate(n, ok, detail)``; the test then asserts ``ok``."""

    def record(n, ok, detail=""):
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        GATE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line, end=" ")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if GATE_LINES:
        terminalreporter.section("acceptance gate")
        for line in sorted(GATE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
