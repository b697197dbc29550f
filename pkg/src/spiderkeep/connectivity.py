"""Vertex connectivity, minimum vertex cuts, fragments and ends.

Connectivity is computed with unit-capacity max flow on the split-vertex
network (each vertex ``v`` becomes ``v_in -> v_out`` with capacity 1), using
Even's reduction to at most ``(kappa + 1) * n`` source/sink pairs.
Minimum-cut enumeration is exhaustive over vertex subsets of size kappa,
which is the intended desk-scale regime.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator

from .errors import CapExceeded, CompleteGraph, Disconnected, EmptyGraph, HypothesisNotMet, NotACut
from .graph import Graph, VertexSet, connected_components, min_degree, neighborhood, vertex_set

EXHAUSTIVE_LIMIT = 14
# Exhaustive mode is also used above EXHAUSTIVE_LIMIT while C(n, kappa) stays under this.
SUBSET_BUDGET = 50_000


@dataclass(frozen=True)
class CutStructure:
    cut: VertexSet
    fragments: tuple[VertexSet, ...]
    chosen_fragment: int
    complement: VertexSet

    @property
    def fragment(self) -> VertexSet:
        return self.fragments[self.chosen_fragment]


@dataclass(frozen=True, order=True)
class End:
    fragment: VertexSet
    cut: VertexSet
    verified_minimal: bool = field(default=True, compare=False)

    def to_dict(self) -> dict:
        return {
            "fragment": list(self.fragment),
            "cut": list(self.cut),
            "verified_minimal": self.verified_minimal,
        }


@dataclass(frozen=True)
class Lemma1Result:
    ok: bool
    k: int
    ends_checked: int
    cuts_checked: int
    violation: tuple[End, VertexSet] | None = None

    def __bool__(self) -> bool:
        return self.ok


# -- max flow on the split network -------------------------------------------


class _SplitNetwork:
    """Residual network for internally vertex-disjoint paths in ``g``."""

    def __init__(self, g: Graph):
        self.labels = g.vertices
        self.index = {v: i for i, v in enumerate(self.labels)}
        n = len(self.labels)
        head: list[int] = []
        cap: list[int] = []
        out: list[list[int]] = [[] for _ in range(2 * n)]

        def arc(a: int, b: int, c: int = 1) -> None:
            out[a].append(len(head))
            head.append(b)
            cap.append(c)
            out[b].append(len(head))
            head.append(a)
            cap.append(0)

        for i in range(n):
            arc(2 * i, 2 * i + 1)
        for u, v in g.edges():
            iu, iv = self.index[u], self.index[v]
            # edge arcs are uncapacitated so every minimum cut is a vertex cut
            arc(2 * iu + 1, 2 * iv, n)
            arc(2 * iv + 1, 2 * iu, n)
        self.head = head
        self.cap0 = cap
        self.out = out
        self.cap: list[int] = []

    def max_flow(self, s: int, t: int, cutoff: int | None = None) -> int:
        """Number of internally disjoint s-t paths, stopping at ``cutoff``."""
        head, out = self.head, self.out
        cap = self.cap = list(self.cap0)
        src, snk = 2 * self.index[s] + 1, 2 * self.index[t]
        flow = 0
        size = len(out)
        while cutoff is None or flow < cutoff:
            pred = [-1] * size
            pred[src] = -2
            queue = deque([src])
            found = False
            while queue and not found:
                a = queue.popleft()
                for e in out[a]:
                    if cap[e] and pred[head[e]] == -1:
                        b = head[e]
                        pred[b] = e
                        if b == snk:
                            found = True
                            break
                        queue.append(b)
            if not found:
                break
            b = snk
            while b != src:
                e = pred[b]
                cap[e] -= 1
                cap[e ^ 1] += 1
                b = head[e ^ 1]
            flow += 1
        return flow

    def source_side_cut(self, s: int) -> VertexSet:
        """Minimum separator closest to ``s`` after a completed max_flow."""
        head, out, cap = self.head, self.out, self.cap
        src = 2 * self.index[s] + 1
        seen = {src}
        queue = deque([src])
        while queue:
            a = queue.popleft()
            for e in out[a]:
                if cap[e] and head[e] not in seen:
                    seen.add(head[e])
                    queue.append(head[e])
        return vertex_set(
            self.labels[i]
            for i in range(len(self.labels))
            if 2 * i in seen and 2 * i + 1 not in seen
        )


def local_connectivity(g: Graph, s: int, t: int, cutoff: int | None = None) -> int:
    """Maximum number of internally vertex-disjoint s-t paths (s, t non-adjacent)."""
    if g.has_edge(s, t):
        raise ValueError("local connectivity is defined for non-adjacent pairs")
    return _SplitNetwork(g).max_flow(s, t, cutoff)


def minimum_separator(g: Graph, s: int, t: int) -> VertexSet:
    """A minimum s-t vertex separator, the one closest to ``s``."""
    if g.has_edge(s, t):
        raise ValueError("adjacent vertices have no separator")
    net = _SplitNetwork(g)
    net.max_flow(s, t)
    return net.source_side_cut(s)


def _even_pairs(g: Graph, bound: int) -> Iterator[tuple[int, int]]:
    vs = g.vertices
    i = 0
    while i <= bound and i < len(vs):
        x = vs[i]
        nx = g.neighbors(x)
        for y in vs[i + 1 :]:
            if y not in nx:
                yield x, y
        i += 1


@lru_cache(maxsize=8192)
def vertex_connectivity(g: Graph) -> int:
    """kappa(g); n - 1 for complete graphs, 0 for disconnected graphs and K_1."""
    n = g.order
    if n == 0:
        raise EmptyGraph("connectivity of the empty graph")
    if n == 1 or len(connected_components(g)) > 1:
        return 0
    if g.is_complete():
        return n - 1
    net = _SplitNetwork(g)
    best = min_degree(g)
    vs = g.vertices
    i = 0
    while i <= best and i < n:
        x = vs[i]
        nx = g.neighbors(x)
        for y in vs[i + 1 :]:
            if y not in nx:
                best = min(best, net.max_flow(x, y, best))
        i += 1
    return best


def is_k_connected(g: Graph, k: int) -> bool:
    """kappa(g) >= k, with early exit."""
    if k <= 0:
        return g.order >= 1
    n = g.order
    if n <= k:
        return False
    if g.is_complete():
        return True
    if min_degree(g) < k or len(connected_components(g)) > 1:
        return False
    net = _SplitNetwork(g)
    for x, y in _even_pairs(g, k - 1):
        if net.max_flow(x, y, k) < k:
            return False
    return True


# -- subset machinery -----------------------------------------------------------


class _Masks:
    """Bitmask view of a graph for fast 'does removing T disconnect?' tests."""

    def __init__(self, g: Graph):
        self.labels = g.vertices
        self.index = {v: i for i, v in enumerate(self.labels)}
        self.adj = [0] * len(self.labels)
        for u, v in g.edges():
            iu, iv = self.index[u], self.index[v]
            self.adj[iu] |= 1 << iv
            self.adj[iv] |= 1 << iu
        self.full = (1 << len(self.labels)) - 1

    def mask(self, vertices) -> int:
        m = 0
        for v in vertices:
            m |= 1 << self.index[v]
        return m

    def reach(self, start_bit: int, allowed: int) -> int:
        adj = self.adj
        seen = start_bit
        frontier = start_bit
        while frontier:
            nxt = 0
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                nxt |= adj[b.bit_length() - 1]
            nxt &= allowed & ~seen
            seen |= nxt
            frontier = nxt
        return seen

    def disconnects(self, removed: int) -> bool:
        rest = self.full & ~removed
        if rest == 0:
            return False
        return self.reach(rest & -rest, rest) != rest


def _cut_candidates(g: Graph, size: int) -> Iterator[VertexSet]:
    masks = _Masks(g)
    for combo in combinations(range(g.order), size):
        m = 0
        for i in combo:
            m |= 1 << i
        if masks.disconnects(m):
            yield tuple(masks.labels[i] for i in combo)


def _require_cuttable(g: Graph) -> None:
    if g.order == 0:
        raise EmptyGraph("empty graph has no vertex cut")
    if len(connected_components(g)) > 1:
        raise Disconnected("graph is disconnected")
    if g.is_complete():
        raise CompleteGraph("a complete graph has no vertex cut")


def min_vertex_cut(g: Graph) -> VertexSet:
    """Lexicographically least minimum vertex cut."""
    _require_cuttable(g)
    return next(_cut_candidates(g, vertex_connectivity(g)))


def all_min_cuts(g: Graph, cap: int | None = None) -> list[VertexSet]:
    """Every minimum vertex cut in lexicographic order.

    Raises CapExceeded when more than ``cap`` cuts exist.
    """
    _require_cuttable(g)
    cuts = []
    for cut in _cut_candidates(g, vertex_connectivity(g)):
        cuts.append(cut)
        if cap is not None and len(cuts) > cap:
            raise CapExceeded(f"more than {cap} minimum vertex cuts")
    return cuts


def is_vertex_cut(g: Graph, cut) -> bool:
    cut = set(cut)
    if not cut <= set(g.vertices):
        return False
    return len(connected_components(g, cut)) > 1


def fragments_of_cut(g: Graph, cut) -> list[VertexSet]:
    """Components of g - cut. Unions of these are the remaining fragments."""
    cut = vertex_set(cut)
    comps = connected_components(g, cut) if set(cut) <= set(g.vertices) else []
    if len(comps) < 2:
        raise NotACut(f"{list(cut)} is not a vertex cut")
    return comps


def cut_structure(g: Graph, cut=None) -> CutStructure:
    """Partition S, F, F-bar for ``cut`` (default: the canonical minimum cut).

    The chosen fragment is the smallest component, ties to the lowest label.
    """
    cut = min_vertex_cut(g) if cut is None else vertex_set(cut)
    frags = fragments_of_cut(g, cut)
    chosen = min(range(len(frags)), key=lambda i: (len(frags[i]), frags[i]))
    rest = vertex_set(v for i, f in enumerate(frags) if i != chosen for v in f)
    return CutStructure(cut, tuple(frags), chosen, rest)


# -- ends ------------------------------------------------------------------------


def _use_exhaustive(g: Graph, kappa: int, exhaustive_limit: int) -> bool:
    return g.order <= exhaustive_limit or comb(g.order, kappa) <= SUBSET_BUDGET


def find_ends(g: Graph, mode: str = "auto", exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> list[End]:
    """Inclusion-minimal fragments, each with a witnessing minimum cut.

    ``mode`` is ``"exhaustive"``, ``"heuristic"`` or ``"auto"``. Exhaustive
    results are exact. Heuristic results are refined with flow separators and
    flagged ``verified_minimal=False`` unless all cuts could be enumerated.
    """
    _require_cuttable(g)
    kappa = vertex_connectivity(g)
    if mode == "auto":
        mode = "exhaustive" if _use_exhaustive(g, kappa, exhaustive_limit) else "heuristic"
    if mode == "exhaustive":
        return _ends_exhaustive(g)
    if mode == "heuristic":
        return _ends_heuristic(g, kappa)
    raise ValueError(f"unknown mode {mode!r}")


def _ends_exhaustive(g: Graph) -> list[End]:
    witness: dict[VertexSet, VertexSet] = {}
    for cut in all_min_cuts(g):
        for comp in connected_components(g, cut):
            witness.setdefault(comp, cut)
    frags = sorted(witness, key=lambda f: (len(f), f))
    ends: list[End] = []
    chosen: list[frozenset[int]] = []
    for f in frags:
        fs = frozenset(f)
        # candidates are sorted by size, so any contained fragment came first
        if any(c < fs for c in chosen):
            continue
        chosen.append(fs)
        ends.append(End(f, witness[f]))
    return sorted(ends)


def _ends_heuristic(g: Graph, kappa: int) -> list[End]:
    structure = cut_structure(g)
    frag, cut = set(structure.fragment), structure.cut
    improved = True
    while improved:
        improved = False
        outside = [v for v in g.vertices if v not in frag and v not in cut]
        for x in sorted(frag):
            for y in outside:
                if g.has_edge(x, y):
                    continue
                sep = minimum_separator(g, x, y)
                if len(sep) != kappa:
                    continue
                side = next(c for c in connected_components(g, sep) if x in c)
                if set(side) < frag:
                    frag, cut = set(side), sep
                    improved = True
                    break
            if improved:
                break
    end = End(vertex_set(frag), vertex_set(cut), verified_minimal=False)
    return [end]


def is_end(g: Graph, fragment, cuts: list[VertexSet] | None = None) -> bool:
    """Check that ``fragment`` is a component for some minimum cut and contains no smaller one."""
    fragment = frozenset(fragment)
    cuts = all_min_cuts(g) if cuts is None else cuts
    is_fragment = False
    for cut in cuts:
        for comp in connected_components(g, cut):
            cs = frozenset(comp)
            if cs == fragment:
                is_fragment = True
            elif cs < fragment:
                return False
    return is_fragment


# -- end versus cut disjointness ---------------------------------------------------


def check_lemma1(g: Graph) -> Lemma1Result:
    """Check that no end meets any minimum vertex cut.

    Requires kappa(g) = k >= 1, g not complete and min degree >= floor(3k/2).
    """
    if g.order == 0:
        raise HypothesisNotMet("empty graph")
    if g.is_complete():
        raise CompleteGraph("complete graphs have no vertex cut")
    k = vertex_connectivity(g)
    if k < 1:
        raise Disconnected("graph is disconnected")
    if min_degree(g) < (3 * k) // 2:
        raise HypothesisNotMet(f"min degree {min_degree(g)} < floor(3*{k}/2)")
    cuts = all_min_cuts(g)
    ends = _ends_exhaustive(g)
    for end in ends:
        fs = set(end.fragment)
        for cut in cuts:
            if fs & set(cut):
                return Lemma1Result(False, k, len(ends), len(cuts), (end, cut))
    return Lemma1Result(True, k, len(ends), len(cuts))


def fragment_neighborhood(g: Graph, fragment) -> VertexSet:
    return neighborhood(g, fragment)
