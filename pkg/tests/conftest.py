import itertools
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from atomgraph import AtomGraph  # noqa: E402

# (criterion number, passed, detail) rows filled in by test_acceptance
ACCEPTANCE: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def cycle(n):
    return AtomGraph.from_edges([str(i) for i in range(n)], [(str(i), str((i + 1) % n)) for i in range(n)])


def complete(n):
    vs = [f"v{i}" for i in range(n)]
    return AtomGraph.from_edges(vs, itertools.combinations(vs, 2))


def edgeless(n):
    return AtomGraph.from_edges([f"v{i}" for i in range(n)], [])


def path(n):
    vs = [f"v{i}" for i in range(n)]
    return AtomGraph.from_edges(vs, zip(vs, vs[1:]))


def random_graph(rng, n, p):
    A = np.triu(rng.random((n, n)) < p, 1)
    return AtomGraph.from_adjacency(A | A.T)


def small_graph_corpus():
    """Every graph with at most 14 vertices that the witness tests use."""
    rng = np.random.default_rng(2024)
    out = [cycle(5), cycle(7), complete(4), edgeless(6), path(3), path(6)]
    out += [random_graph(rng, n, p) for n in (6, 8, 10, 12, 14) for p in (0.2, 0.5, 0.8)]
    return out


@st.composite
def graphs(draw, max_vertices=9):
    n = draw(st.integers(1, max_vertices))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return AtomGraph([str(i) for i in range(n)], frozenset(chosen))


@pytest.fixture
def c5():
    return cycle(5)
