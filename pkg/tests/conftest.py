"""Shared graph builders and session-scoped tessellation fixtures."""

import numpy as np
import pytest

from seplab import Graph, TessellationSpec, grid, regular_tree, tessellation_disk


def path(n: int) -> Graph:
    return grid(1, n)


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def clique(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def small_corpus() -> list[tuple[str, Graph]]:
    """90 graphs with n <= 12: named families plus 50 seeded random graphs."""
    out: list[tuple[str, Graph]] = []
    for n in range(2, 13):
        out.append((f"P_{n}", path(n)))
    for n in range(3, 13):
        out.append((f"C_{n}", cycle(n)))
    for n in range(2, 9):
        out.append((f"K_{n}", clique(n)))
    for a, b in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 3), (3, 4)]:
        out.append((f"grid_{a}x{b}", grid(a, b)))
    for deg, depth in [(3, 1), (3, 2), (4, 1), (2, 4), (5, 1)]:
        out.append((f"tree_{deg}_{depth}", regular_tree(deg, depth)))
    rng = np.random.default_rng(20260814)
    for k in range(50):
        n = int(rng.integers(4, 13))
        p = 0.25 + 0.4 * float(rng.random())
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)
                 if rng.random() < p]
        out.append((f"rand_{k}", Graph.from_edges(n, edges)))
    return out


@pytest.fixture(scope="session")
def corpus():
    return small_corpus()


@pytest.fixture(scope="session")
def disk73_r9():
    return tessellation_disk(TessellationSpec(7, 3), 9)


@pytest.fixture(scope="session")
def disk73_r12():
    return tessellation_disk(TessellationSpec(7, 3), 12)


@pytest.fixture(scope="session")
def disk73_r15():
    return tessellation_disk(TessellationSpec(7, 3), 15)


@pytest.fixture(scope="session")
def disk73_r18():
    return tessellation_disk(TessellationSpec(7, 3), 18)


@pytest.fixture(scope="session")
def disk44_r9():
    return tessellation_disk(TessellationSpec(4, 4), 9)
