from __future__ import annotations

import pytest
from hypothesis import strategies as st

from ghmoy.corpus import corpus_entries, load_entry, load_manifest
from ghmoy.grid import O, OSTAR, X, GridDiagram, Marking


@st.composite
def grid_diagrams(draw, min_n: int = 2, max_n: int = 4):
    """Valid graph grid diagrams with one X per row and column and weight-1 edges.

    Every component is a closed curve; an O* on a component turns it into a
    loop at a vertex, which is balanced for any single weight.
    """
    n = draw(st.integers(min_n, max_n))
    so = draw(st.permutations(range(n)))
    sx = draw(st.permutations(range(n)).filter(lambda p: all(p[r] != so[r] for r in range(n))))
    stars = draw(st.sets(st.integers(0, n - 1)))
    ms = [Marking(so[r], r, OSTAR if r in stars else O) for r in range(n)]
    ms += [Marking(sx[r], r, X, 1) for r in range(n)]
    return GridDiagram(n, tuple(ms))


@pytest.fixture(scope="session")
def manifest():
    return load_manifest()


@pytest.fixture(scope="session")
def corpus(manifest):
    return {item["name"]: load_entry(item["name"]) for item in manifest}


@pytest.fixture(scope="session")
def entries():
    return corpus_entries()


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    lines = test_acceptance.ACCEPTANCE_LINES
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
