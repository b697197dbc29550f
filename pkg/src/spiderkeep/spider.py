"""Rooted spiders, brooms and the embedding of a spider into a broom.

A spider is described by its leg lengths. Spider vertices are named by
``(leg, position)`` pairs: ``ROOT = (0, 0)`` and ``(i, j)`` is the j-th vertex
of leg i counted from the root (both 1-based).

A broom is a path ``v_1 .. v_t`` plus a root ``u`` joined to ``m - 1`` chosen
path positions. Broom vertices are named by position, with 0 for ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .errors import NotATree, OrderMismatch, ZeroLeg
from .graph import Graph, connected_components

ROOT = (0, 0)
SpiderVertex = tuple[int, int]
Embedding = dict[SpiderVertex, int]


@dataclass(frozen=True)
class SpiderSpec:
    legs: tuple[int, ...]

    @property
    def m(self) -> int:
        return 1 + sum(self.legs)

    def vertices(self) -> list[SpiderVertex]:
        return [ROOT] + [(i, j) for i, ell in enumerate(self.legs, 1) for j in range(1, ell + 1)]

    def edges(self) -> list[tuple[SpiderVertex, SpiderVertex]]:
        out = []
        for i, ell in enumerate(self.legs, 1):
            prev = ROOT
            for j in range(1, ell + 1):
                out.append((prev, (i, j)))
                prev = (i, j)
        return out

    def tree(self) -> Graph:
        """The spider as a Graph labelled 0..m-1, root = 0."""
        index = {v: i for i, v in enumerate(self.vertices())}
        return Graph.from_edges(self.m, ((index[a], index[b]) for a, b in self.edges()))

    def legs_text(self) -> str:
        return ",".join(map(str, self.legs))

    def __str__(self) -> str:
        return f"spider({self.legs_text() or '-'})"


@dataclass(frozen=True)
class Broom:
    t: int
    attachments: frozenset[int]

    def __post_init__(self):
        a = frozenset(self.attachments)
        object.__setattr__(self, "attachments", a)
        if any(p < 1 or p > self.t for p in a):
            raise ValueError(f"attachment positions must lie in 1..{self.t}")

    @property
    def m(self) -> int:
        return len(self.attachments) + 1

    def has_edge(self, a: int, b: int) -> bool:
        if a > b:
            a, b = b, a
        if a == 0:
            return b in self.attachments
        return b == a + 1 and b <= self.t


def spec_from_legs(legs: Iterable[int]) -> SpiderSpec:
    legs = list(legs)
    if any(ell < 1 for ell in legs):
        raise ZeroLeg(f"leg lengths must be positive, got {legs}")
    return SpiderSpec(tuple(sorted(legs, reverse=True)))


def parse_legs(text: str) -> SpiderSpec:
    """Parse the ``"2,1,1"`` leg syntax; an empty string is the one-vertex spider."""
    text = text.strip()
    if not text:
        return SpiderSpec(())
    try:
        legs = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise ZeroLeg(f"cannot parse legs {text!r}") from None
    return spec_from_legs(legs)


def _partitions(total: int, largest: int) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), 0, -1):
        for rest in _partitions(total - first, first):
            yield (first,) + rest


def enumerate_spider_specs(m: int) -> list[SpiderSpec]:
    """One rooted spec per integer partition of m - 1, descending-lex order."""
    if m < 1:
        raise ValueError("m must be at least 1")
    return [SpiderSpec(p) for p in _partitions(m - 1, m - 1)]


def is_spider(tree: Graph) -> bool:
    """True iff the tree has at most one vertex of degree >= 3."""
    n = tree.order
    if n == 0 or tree.size != n - 1 or len(connected_components(tree)) != 1:
        raise NotATree("input is not a tree")
    return sum(1 for v in tree.vertices if tree.degree(v) >= 3) <= 1


def spec_of_spider(tree: Graph, root: int | None = None) -> SpiderSpec:
    """Leg lengths of a spider tree read from ``root`` (default: its center)."""
    if not is_spider(tree):
        raise ValueError("tree is not a spider")
    if root is None:
        big = [v for v in tree.vertices if tree.degree(v) >= 3]
        root = big[0] if big else min(tree.vertices, key=lambda v: (tree.degree(v), v))
    legs = []
    for nb in sorted(tree.neighbors(root)):
        prev, cur, ell = root, nb, 1
        while True:
            nxt = [w for w in tree.neighbors(cur) if w != prev]
            if len(nxt) != 1:
                break
            prev, cur, ell = cur, nxt[0], ell + 1
        legs.append(ell)
    return spec_from_legs(legs)


def embed_spider_in_broom(b: Broom, s: SpiderSpec) -> Embedding:
    """Embed ``s`` into ``b`` with the spider root on the broom root.

    Legs are placed longest first. Each starts at the largest attachment not
    yet used and walks left along the path. Everything already used lies to
    the right of that start, and the unused attachments below it number at
    least the remaining leg total, so the walk always fits.
    """
    if s.m - 1 != len(b.attachments):
        raise OrderMismatch(f"spider order {s.m} does not match broom with {len(b.attachments)} attachments")
    emb: Embedding = {ROOT: 0}
    used: set[int] = set()
    free = sorted(b.attachments)
    remaining = sum(s.legs)
    for i, ell in enumerate(s.legs, 1):
        assert len(free) >= remaining, "fewer free attachments than remaining leg length"
        start = free[-1]
        lowest_used = min(used, default=b.t + 1)
        assert start - ell + 1 >= 1 and start < lowest_used, "leg interval leaves the free region"
        for j in range(1, ell + 1):
            pos = start - j + 1
            emb[(i, j)] = pos
            used.add(pos)
        free = [p for p in free if p < start - ell + 1]
        remaining -= ell
    return emb


def verify_embedding(b: Broom, s: SpiderSpec, emb: Embedding) -> bool:
    """Injective, root-preserving and edge-preserving."""
    if set(emb) != set(s.vertices()) or emb.get(ROOT) != 0:
        return False
    images = list(emb.values())
    if len(set(images)) != len(images):
        return False
    if any(p < 0 or p > b.t for p in images):
        return False
    return all(b.has_edge(emb[x], emb[y]) for x, y in s.edges())


def all_brooms(t: int, m: int) -> Iterator[Broom]:
    for attach in combinations(range(1, t + 1), m - 1):
        yield Broom(t, frozenset(attach))


def spider_map_to_json(emb: dict[SpiderVertex, int]) -> dict[str, int]:
    return {_vertex_key(v): img for v, img in sorted(emb.items())}


def spider_map_from_json(data: dict[str, int]) -> dict[SpiderVertex, int]:
    return {_parse_vertex_key(k): int(v) for k, v in data.items()}


def _vertex_key(v: SpiderVertex) -> str:
    return "root" if v == ROOT else f"{v[0]}.{v[1]}"


def _parse_vertex_key(key: str) -> SpiderVertex:
    if key == "root":
        return ROOT
    leg, pos = key.split(".")
    return int(leg), int(pos)
