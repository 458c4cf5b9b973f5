from pathlib import Path

import pytest
from hypothesis import strategies as st

from argdebate import framework as fw

DATA = Path(__file__).parent / "data"


@pytest.fixture
def ex1():
    return fw.read_apx(DATA / "example1.apx")


@pytest.fixture
def ex1_path():
    return DATA / "example1.apx"


@st.composite
def frameworks(draw, max_args=6, self_attacks=True):
    n = draw(st.integers(1, max_args))
    names = [f"a{i}" for i in range(n)]
    pairs = [(x, y) for x in names for y in names if self_attacks or x != y]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return fw.ArgumentationFramework(tuple(names), tuple(chosen))


@st.composite
def rooted_frameworks(draw, max_args=6, self_attacks=True):
    af = draw(frameworks(max_args, self_attacks))
    return af, draw(st.sampled_from(af.args))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
