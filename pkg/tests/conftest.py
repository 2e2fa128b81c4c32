import random

import pytest
from hypothesis import strategies as st

from coarse_menger.graph import Graph


def path_graph(n: int) -> Graph:
    return Graph(range(n), [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_connected(rng: random.Random, n: int, p: float = 0.3) -> Graph:
    edges = set()
    for v in range(1, n):
        edges.add((rng.randrange(v), v))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    return Graph(range(n), edges)


@st.composite
def small_connected_graphs(draw, max_n: int = 8):
    n = draw(st.integers(min_value=2, max_value=max_n))
    seed = draw(st.integers(min_value=0, max_value=10**6))
    return random_connected(random.Random(seed), n)


@pytest.fixture
def rng():
    return random.Random(12345)
