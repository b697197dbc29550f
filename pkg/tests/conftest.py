"""Shared helpers: small independent oracles that avoid the package's flow code."""

from itertools import combinations

import pytest

from spiderkeep.graph import Graph


def _pieces(adj: dict, removed) -> int:
    left = [v for v in adj if v not in removed]
    seen, count = set(), 0
    for s in left:
        if s in seen:
            continue
        count += 1
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in removed and y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


def adjacency(g: Graph) -> dict:
    return {v: set(g.neighbors(v)) for v in g.vertices}


def disconnecting_sets(g: Graph, size: int) -> list[tuple]:
    """All vertex subsets of the given size whose removal leaves >= 2 components."""
    adj = adjacency(g)
    return [t for t in combinations(g.vertices, size) if _pieces(adj, set(t)) >= 2]


def kappa_by_subsets(g: Graph) -> int:
    adj = adjacency(g)
    n = g.order
    for size in range(n - 1):
        for t in combinations(g.vertices, size):
            if _pieces(adj, set(t)) != 1:
                return size
    return max(n - 1, 0)


@pytest.fixture
def oracle():
    class _O:
        pieces = staticmethod(_pieces)
        adjacency = staticmethod(adjacency)
        cuts = staticmethod(disconnecting_sets)
        kappa = staticmethod(kappa_by_subsets)

    return _O


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
