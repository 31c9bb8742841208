import numpy as np
import pytest
from hypothesis import strategies as st

from credal_rml.core import CredalSet, Event

EX3 = [[0.5, 0.0, 0.5], [0.0, 0.5, 0.5], [1 / 3, 1 / 3, 1 / 3]]
E12 = Event(frozenset({0, 1}))


@pytest.fixture
def ex3():
    return CredalSet(EX3)


def random_instance(rng, n_states=None, max_vertices=6, min_pe=0.05):
    """A random credal set and an event every prior gives probability >= min_pe."""
    while True:
        n = n_states or int(rng.integers(3, 6))
        k = int(rng.integers(2, max_vertices + 1))
        pts = rng.dirichlet(np.ones(n), size=k)
        size = int(rng.integers(1, n))
        members = rng.choice(n, size=size, replace=False)
        e = Event(frozenset(int(i) for i in members))
        C = CredalSet(pts)
        if C.probabilities(e).min() >= min_pe:
            return C, e


@st.composite
def instances(draw, min_pe=0.05):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_instance(np.random.default_rng(seed), min_pe=min_pe)


def sample_hull(C, rng, m=50):
    w = rng.dirichlet(np.ones(len(C)), size=m)
    return w @ C.vertices


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
