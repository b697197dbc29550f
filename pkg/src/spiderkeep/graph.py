"""Simple undirected graphs with stable integer labels.

Graphs are immutable. Deleting vertices produces a new graph over the
surviving labels, so witnesses found in a reduced graph can always be checked
against the original input.
"""

from __future__ import annotations

import hashlib
from collections import deque
from typing import Iterable, Iterator

from .errors import (
    DuplicateEdge,
    EmptyGraph,
    IndexOutOfRange,
    MalformedLine,
    SelfLoop,
    UnknownVertex,
)

VertexSet = tuple[int, ...]


def vertex_set(vertices: Iterable[int]) -> VertexSet:
    """Canonical form of a vertex collection: sorted, duplicate free."""
    return tuple(sorted(set(vertices)))


class Graph:
    __slots__ = ("_adj", "_vertices", "_size", "_hash")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]] = ()):
        adj: dict[int, set[int]] = {v: set() for v in vertices}
        for u, v in edges:
            if u == v:
                raise SelfLoop(f"self-loop at {u}")
            if u not in adj or v not in adj:
                raise UnknownVertex(f"edge ({u}, {v}) uses an unknown vertex")
            if v in adj[u]:
                raise DuplicateEdge(f"duplicate edge ({u}, {v})")
            adj[u].add(v)
            adj[v].add(u)
        self._init({v: frozenset(ns) for v, ns in adj.items()})

    def _init(self, adj: dict[int, frozenset[int]]) -> None:
        self._adj = adj
        self._vertices = tuple(sorted(adj))
        self._size = sum(len(ns) for ns in adj.values()) // 2
        self._hash = None

    @classmethod
    def _from_adj(cls, adj: dict[int, frozenset[int]]) -> Graph:
        g = cls.__new__(cls)
        g._init(adj)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        return cls(range(n), edges)

    @property
    def vertices(self) -> VertexSet:
        return self._vertices

    @property
    def order(self) -> int:
        return len(self._vertices)

    @property
    def size(self) -> int:
        return self._size

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __iter__(self) -> Iterator[int]:
        return iter(self._vertices)

    def __len__(self) -> int:
        return len(self._vertices)

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownVertex(f"vertex {v} not in graph") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in self._vertices for v in sorted(self._adj[u]) if u < v]

    def is_complete(self) -> bool:
        n = len(self._vertices)
        return all(len(ns) == n - 1 for ns in self._adj.values())

    def is_contiguous(self) -> bool:
        """True when the labels are exactly 0..n-1."""
        return not self._vertices or self._vertices[-1] == len(self._vertices) - 1

    def induced(self, keep: Iterable[int]) -> Graph:
        keep = set(keep)
        missing = keep - self._adj.keys()
        if missing:
            raise UnknownVertex(f"unknown vertices {sorted(missing)}")
        return Graph._from_adj({v: self._adj[v] & keep for v in keep})

    def delete(self, removed: Iterable[int]) -> Graph:
        return delete_vertices(self, removed)

    def relabel(self) -> tuple[Graph, dict[int, int]]:
        """Return a copy labelled 0..n-1 plus the old-to-new label map."""
        mapping = {v: i for i, v in enumerate(self._vertices)}
        g = Graph(range(len(mapping)), ((mapping[u], mapping[v]) for u, v in self.edges()))
        return g, mapping

    def digest(self) -> str:
        """Order-independent hash of the labelled vertex and edge sets."""
        text = ",".join(map(str, self._vertices)) + "|" + ";".join(
            f"{u}-{v}" for u, v in self.edges()
        )
        return hashlib.sha256(text.encode()).hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vertices, tuple(self.edges())))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(order={self.order}, size={self.size})"


def load_graph(text: str) -> Graph:
    """Parse the edge-list format.

    Lines starting with ``#`` are comments. The first data line is the vertex
    count ``n``; each further line is ``u v`` with ``0 <= u, v < n``.
    """
    n = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1 or not _is_int(parts[0]) or int(parts[0]) < 0:
                raise MalformedLine(f"line {lineno}: expected vertex count, got {raw!r}")
            n = int(parts[0])
            continue
        if len(parts) != 2 or not all(_is_int(p) for p in parts):
            raise MalformedLine(f"line {lineno}: expected 'u v', got {raw!r}")
        u, v = int(parts[0]), int(parts[1])
        if not (0 <= u < n and 0 <= v < n):
            raise IndexOutOfRange(f"line {lineno}: vertex out of range 0..{n - 1}")
        if u == v:
            raise SelfLoop(f"line {lineno}: self-loop at {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(f"line {lineno}: duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    if n is None:
        raise MalformedLine("missing vertex count")
    return Graph.from_edges(n, edges)


def _is_int(token: str) -> bool:
    return token.lstrip("-").isdigit()


def dump_graph(g: Graph) -> str:
    """Canonical edge-list text; requires labels 0..n-1."""
    if not g.is_contiguous():
        raise ValueError("edge-list format needs labels 0..n-1; call relabel() first")
    lines = [str(g.order)] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def delete_vertices(g: Graph, removed: Iterable[int]) -> Graph:
    removed = set(removed)
    if not removed:
        return g
    missing = removed - set(g.vertices)
    if missing:
        raise UnknownVertex(f"cannot delete unknown vertices {sorted(missing)}")
    return Graph._from_adj(
        {v: ns - removed for v, ns in g._adj.items() if v not in removed}
    )


def min_degree(g: Graph) -> int:
    if g.order == 0:
        raise EmptyGraph("minimum degree of the empty graph")
    return min(len(g.neighbors(v)) for v in g.vertices)


def max_degree(g: Graph) -> int:
    if g.order == 0:
        raise EmptyGraph("maximum degree of the empty graph")
    return max(len(g.neighbors(v)) for v in g.vertices)


def connected_components(g: Graph, removed: Iterable[int] = ()) -> list[VertexSet]:
    """Components of ``g - removed``, ordered by smallest label."""
    blocked = set(removed)
    seen = set(blocked)
    comps = []
    for s in g.vertices:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(g: Graph) -> bool:
    return g.order > 0 and len(connected_components(g)) == 1


def neighborhood(g: Graph, part: Iterable[int]) -> VertexSet:
    """N(part): vertices outside ``part`` adjacent to some vertex of it."""
    part = set(part)
    out: set[int] = set()
    for v in part:
        out |= g.neighbors(v)
    return vertex_set(out - part)


# Named families used throughout tests and examples.


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)
