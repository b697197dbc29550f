"""Broom and spider extraction with independently verified certificates.

The greedy procedure deletes vertices one at a time along a path that stays
inside a shrinking sequence of ends, stops the first time the minimum degree
falls to ``floor(3k/2) - 1``, and then swaps the last deleted vertex for a
minimum-degree vertex ``u`` that sees at least ``m - 1`` path vertices. That
gives a broom; a spider is then embedded into it.

Every intermediate claim is checked. When a step cannot be confirmed the run
restarts from another end, and after that falls back to brute-force search.
Nothing unverified is ever returned.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import combinations, islice
from typing import Iterator

from .connectivity import (
    EXHAUSTIVE_LIMIT,
    End,
    find_ends,
    is_k_connected,
    vertex_connectivity,
)
from .errors import (
    BadParameters,
    CompleteGraph,
    EmptyGraph,
    ExtractionFailed,
    HypothesisNotMet,
    ReductionFailed,
    SpiderkeepError,
    TooLarge,
)
from .graph import Graph, VertexSet, delete_vertices, min_degree, vertex_set
from .oracle import brute_broom_removal, brute_spider_removal, find_spanning_spider, oracle_limit
from .spider import (
    ROOT,
    Broom,
    SpiderSpec,
    embed_spider_in_broom,
    spec_from_legs,
    spider_map_from_json,
    spider_map_to_json,
)

METHODS = ("greedy", "greedy+replacement", "greedy+recovery", "greedy+reextraction", "fallback-oracle")
RESTARTS = 24
REDUCTION_BUDGET = 100
ATTACHMENT_TRIES = 20


def degree_threshold(k: int, m: int) -> int:
    """Minimum degree floor(3k/2) + m - 1 that the extraction requires."""
    return (3 * k) // 2 + m - 1


@dataclass(frozen=True)
class BroomWitness:
    path: tuple[int, ...]
    root: int
    attachments: tuple[int, ...]

    @property
    def vertices(self) -> VertexSet:
        return vertex_set(self.path + (self.root,))

    def broom(self) -> Broom:
        pos = {v: i for i, v in enumerate(self.path, 1)}
        return Broom(len(self.path), frozenset(pos[a] for a in self.attachments))

    def spider_map(self, s: SpiderSpec) -> dict:
        emb = embed_spider_in_broom(self.broom(), s)
        lookup = (self.root,) + self.path
        return {sv: lookup[p] for sv, p in emb.items()}


@dataclass(frozen=True)
class ReductionPath:
    path: tuple[int, ...]
    kappa_before: int
    k: int

    @property
    def s(self) -> int:
        return len(self.path)


@dataclass
class Certificate:
    n: int
    digest: str
    k: int
    m: int
    legs: tuple[int, ...] | None
    method: str
    path: tuple[int, ...]
    root: int | None
    attachments: tuple[int, ...]
    spider_map: dict | None
    kappa_after: int
    verified: bool
    transcript: list = field(default_factory=list)
    seal: str = ""

    def witness_vertices(self) -> VertexSet:
        if self.spider_map is not None:
            return vertex_set(self.spider_map.values())
        return vertex_set(self.path + ((self.root,) if self.root is not None else ()))

    def _body(self) -> dict:
        root = self.root
        return {
            "n": self.n,
            "digest": self.digest,
            "k": self.k,
            "m": self.m,
            "legs": list(self.legs) if self.legs is not None else None,
            "method": self.method,
            "witness": {
                "path": list(self.path),
                "root": root,
                "attachments": [[root, p] for p in sorted(self.attachments)],
                "spider_map": spider_map_to_json(self.spider_map) if self.spider_map is not None else None,
            },
            "kappa_after": self.kappa_after,
            "verified": self.verified,
            "transcript": self.transcript,
        }

    def compute_seal(self) -> str:
        text = json.dumps(self._body(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def to_dict(self) -> dict:
        d = self._body()
        d["seal"] = self.seal
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> Certificate:
        w = d["witness"]
        smap = w.get("spider_map")
        return cls(
            n=d["n"],
            digest=d["digest"],
            k=d["k"],
            m=d["m"],
            legs=tuple(d["legs"]) if d.get("legs") is not None else None,
            method=d["method"],
            path=tuple(w.get("path", [])),
            root=w.get("root"),
            attachments=tuple(p for _, p in w.get("attachments", [])),
            spider_map=spider_map_from_json(smap) if smap is not None else None,
            kappa_after=d["kappa_after"],
            verified=d["verified"],
            transcript=d.get("transcript", []),
            seal=d.get("seal", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> Certificate:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


# -- certificate checking ------------------------------------------------------------


def _broom_shape_reasons(g: Graph, path, root, attachments, m: int) -> list[str]:
    reasons = []
    vertices = list(path) + [root]
    if root is None or any(v not in g for v in vertices) or any(a not in g for a in attachments):
        return ["vertices"]
    if len(set(vertices)) != len(vertices) or len(path) < m - 1:
        reasons.append("shape")
    if len(set(attachments)) != m - 1 or not set(attachments) <= set(path):
        reasons.append("shape")
    if any(not g.has_edge(a, b) for a, b in zip(path, path[1:])):
        reasons.append("edges")
    if any(not g.has_edge(root, a) for a in attachments):
        reasons.append("edges")
    return reasons


def _spider_shape_reasons(g: Graph, legs, smap: dict, m: int) -> list[str]:
    try:
        s = spec_from_legs(legs)
    except SpiderkeepError:
        return ["shape"]
    if s.m != m or set(smap) != set(s.vertices()):
        return ["shape"]
    images = list(smap.values())
    if any(v not in g for v in images):
        return ["vertices"]
    reasons = []
    if len(set(images)) != len(images):
        reasons.append("shape")
    if any(not g.has_edge(smap[a], smap[b]) for a, b in s.edges()):
        reasons.append("edges")
    return reasons


def verify_certificate(g: Graph, k: int, cert: Certificate) -> Verdict:
    """Independent check of a certificate against ``g``.

    Reasons for rejection: ``digest``, ``k``, ``vertices``, ``shape``,
    ``edges``, ``connectivity``, ``kappa_after``, ``verified``, ``seal``.
    """
    reasons: list[str] = []
    if cert.digest != g.digest() or cert.n != g.order:
        reasons.append("digest")
    if cert.k != k:
        reasons.append("k")
    has_broom = cert.root is not None
    if cert.spider_map is not None:
        if cert.legs is None:
            reasons.append("shape")
        else:
            reasons += _spider_shape_reasons(g, cert.legs, cert.spider_map, cert.m)
    elif not has_broom:
        reasons.append("shape")
    if has_broom:
        reasons += _broom_shape_reasons(g, cert.path, cert.root, cert.attachments, cert.m)
    if "vertices" not in reasons and "shape" not in reasons:
        witness = cert.witness_vertices()
        rest = delete_vertices(g, witness)
        kappa = vertex_connectivity(rest) if rest.order else 0
        if kappa < k:
            reasons.append("connectivity")
        if kappa != cert.kappa_after:
            reasons.append("kappa_after")
    if not cert.verified:
        reasons.append("verified")
    if cert.seal != cert.compute_seal():
        reasons.append("seal")
    reasons = list(dict.fromkeys(reasons))
    return Verdict(not reasons, tuple(reasons))


# -- preconditions -------------------------------------------------------------------


def _check_hypotheses(g: Graph, k: int, m: int) -> int:
    if k < 1 or m < 1:
        raise BadParameters("k and m must be positive")
    if g.order == 0:
        raise EmptyGraph("empty graph")
    if g.is_complete():
        raise CompleteGraph("complete graphs are excluded")
    kappa = vertex_connectivity(g)
    if kappa < k:
        raise HypothesisNotMet(f"kappa(G) = {kappa} < k = {k}")
    delta = min_degree(g)
    if delta < degree_threshold(k, m):
        raise HypothesisNotMet(f"min degree {delta} < threshold {degree_threshold(k, m)}")
    return kappa


# -- reduction path --------------------------------------------------------------------


class _Budget(Exception):
    pass


def _ends_touching(h: Graph, v: int, g: Graph, exhaustive_limit: int) -> list[End]:
    if h.order < 2 or h.is_complete():
        return []
    nbrs = g.neighbors(v)
    return [e for e in find_ends(h, exhaustive_limit=exhaustive_limit) if nbrs & set(e.fragment)]


def _reduction_paths(
    g: Graph, k: int, budget: int | None, extra: int = 3, exhaustive_limit: int = EXHAUSTIVE_LIMIT
) -> Iterator[tuple[int, ...]]:
    """Paths P with kappa(g - P) = k whose last vertex sees an end of g - P.

    Iterative deepening from length kappa - k, so shorter paths come first.
    Children are tried by (kappa after deletion, label).
    """
    kappa = vertex_connectivity(g)
    if kappa == k:
        yield ()
        return
    nodes = 0
    longest = min(kappa - k + extra, g.order - k - 2)

    def dfs(path: list[int], h: Graph, kap: int, length: int):
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise _Budget
        left = length - len(path)
        if left == 0:
            if kap == k and _ends_touching(h, path[-1], g, exhaustive_limit):
                yield tuple(path)
            return
        pool = h.vertices if not path else sorted(g.neighbors(path[-1]) & set(h.vertices))
        children = []
        for c in pool:
            hc = delete_vertices(h, [c])
            kc = vertex_connectivity(hc)
            if kc < k or kc - k > left - 1:
                continue
            children.append((kc, c, hc))
        children.sort(key=lambda x: (x[0], x[1]))
        for kc, c, hc in children:
            path.append(c)
            yield from dfs(path, hc, kc, length)
            path.pop()

    for length in range(kappa - k, longest + 1):
        try:
            yield from dfs([], g, kappa, length)
        except _Budget:
            return


def reduce_to_target(
    g: Graph, k: int, budget: int | None = REDUCTION_BUDGET, exhaustive_limit: int | None = None
) -> ReductionPath:
    """Shortest path found with kappa(g - path) = k.

    A budgeted search runs first; for graphs within the oracle order limit an
    unbudgeted search follows if that finds nothing.
    """
    kappa = vertex_connectivity(g)
    if kappa < k:
        raise HypothesisNotMet(f"kappa(G) = {kappa} < k = {k}")
    limit = oracle_limit() if exhaustive_limit is None else exhaustive_limit
    budgets = [budget] + ([None] if budget is not None and g.order <= limit else [])
    for b in budgets:
        for path in _reduction_paths(g, k, b):
            assert len(path) >= kappa - k
            return ReductionPath(path, kappa, k)
    raise ReductionFailed(f"no path reduces kappa from {kappa} to {k}")


# -- greedy broom search ---------------------------------------------------------------


@dataclass
class _Attempt:
    path: list[int]
    broom: BroomWitness
    neighbours_on_path: tuple[int, ...]
    recovered: bool = False


class _Greedy:
    def __init__(self, g: Graph, k: int, m: int, exhaustive_limit: int, restarts: int):
        self.g = g
        self.k = k
        self.m = m
        self.stop = (3 * k) // 2 - 1
        self.exhaustive_limit = exhaustive_limit
        self.restarts = restarts
        self.transcript: list[dict] = []
        self._ok: dict[frozenset, bool] = {}

    def keeps(self, removed) -> bool:
        key = frozenset(removed)
        if key not in self._ok:
            rest = delete_vertices(self.g, key)
            self._ok[key] = rest.order > 0 and is_k_connected(rest, self.k)
        return self._ok[key]

    def log(self, event: str, **data) -> None:
        self.transcript.append({"event": event, **data})

    # starting prefixes

    def starts(self) -> Iterator[tuple[list[int], VertexSet | None]]:
        g, k = self.g, self.k
        kappa = vertex_connectivity(g)
        if kappa == k:
            for end in find_ends(g, exhaustive_limit=self.exhaustive_limit):
                for v in end.fragment:
                    yield [v], end.fragment
            return
        found = False
        try:
            paths = list(islice(_reduction_paths(g, k, REDUCTION_BUDGET), self.restarts))
            if not paths and g.order <= oracle_limit():
                paths = list(islice(_reduction_paths(g, k, None), self.restarts))
        except SpiderkeepError:
            paths = []
        for p in paths:
            h = delete_vertices(g, p)
            self.log("reduction", path=list(p), kappa_before=kappa)
            for end in _ends_touching(h, p[-1], g, self.exhaustive_limit):
                for u1 in sorted(g.neighbors(p[-1]) & set(end.fragment)):
                    found = True
                    yield list(p) + [u1], end.fragment
        if not found:
            self.log("reduction-failed", kappa_before=kappa)
            for v in g.vertices:
                yield [v], None

    def candidates(self, h: Graph, last: int, current: VertexSet | None):
        nbrs = sorted(self.g.neighbors(last) & set(h.vertices))
        if not nbrs:
            return []
        if h.order < 2 or h.is_complete() or vertex_connectivity(h) != self.k:
            return [(v, None) for v in nbrs]
        cur = set(current) if current is not None else None
        ends = [e for e in find_ends(h, exhaustive_limit=self.exhaustive_limit) if set(e.fragment) & set(nbrs)]
        ends.sort(key=lambda e: (not (cur is not None and set(e.fragment) <= cur), min(set(e.fragment) & set(nbrs))))
        out, seen = [], set()
        for e in ends:
            for v in sorted(set(e.fragment) & set(nbrs)):
                if v not in seen:
                    seen.add(v)
                    out.append((v, e.fragment))
        out += [(v, None) for v in nbrs if v not in seen]
        return out

    def grow(self, prefix: list[int], end: VertexSet | None) -> tuple[list[int], bool]:
        """Extend ``prefix`` until the minimum degree first reaches the stop level.

        Returns the deletion path and whether the stop level was reached. A
        stalled path is returned with ``False``.
        """
        g, stop = self.g, self.stop
        prev_delta = min_degree(g)
        path: list[int] = []
        for v in prefix:
            path.append(v)
            if not self.keeps(path):
                self.log("stall", reason="prefix-breaks-connectivity", path=list(path))
                return path[:-1], False
            delta = min_degree(delete_vertices(g, path))
            assert delta >= prev_delta - 1, "minimum degree fell by more than one"
            prev_delta = delta
            if delta <= stop:
                assert delta == stop
                return path, True
        current = end
        while True:
            h = delete_vertices(g, path)
            chosen = None
            for v, frag in self.candidates(h, path[-1], current):
                if self.keeps(path + [v]):
                    chosen = (v, frag)
                    break
                if frag is not None:
                    self.log("end-vertex-in-cut", vertex=v, end=list(frag))
            if chosen is None:
                self.log("stall", reason="no-admissible-neighbour", path=list(path))
                return path, False
            v, current = chosen
            assert g.has_edge(path[-1], v)
            path.append(v)
            delta = min_degree(delete_vertices(g, path))
            assert delta >= prev_delta - 1, "minimum degree fell by more than one"
            prev_delta = delta
            self.log("delete", vertex=v, min_degree=delta, end=list(current) if current else None)
            if delta <= stop:
                assert delta == stop
                return path, True

    def replace(self, path: list[int], end: VertexSet | None) -> _Attempt | None:
        """Swap the last deleted vertex for a vertex u seeing >= m - 1 path vertices."""
        g, m = self.g, self.m
        head = path[:-1]
        h = delete_vertices(g, path)
        on_path = set(head)
        low = [u for u in h.vertices if h.degree(u) == self.stop]
        low.sort(key=lambda u: (not (end is not None and u in end), u))
        others = [u for u in h.vertices if h.degree(u) != self.stop]
        for relaxed, pool in ((False, low), (True, others)):
            for u in pool:
                nb = tuple(p for p in head if p in g.neighbors(u))
                if not relaxed:
                    assert len(nb) >= m - 1, "replacement vertex sees too few path vertices"
                elif len(nb) < m - 1:
                    continue
                if not self.keeps(on_path | {u}):
                    continue
                self.log("replace", u=u, t=len(head), relaxed=relaxed, path_neighbours=len(nb))
                witness = BroomWitness(tuple(head), u, nb[len(nb) - (m - 1):] if m > 1 else ())
                return _Attempt(list(path), witness, nb, recovered=False)
        self.log("stall", reason="no-replacement", path=list(path))
        return None

    def brooms(self) -> Iterator[_Attempt]:
        tried = 0
        for prefix, end in self.starts():
            if tried >= self.restarts:
                return
            tried += 1
            self.log("start", prefix=list(prefix), end=list(end) if end else None)
            path, stopped = self.grow(prefix, end)
            if stopped:
                self.log("stop", t=len(path) - 1, min_degree=self.stop)
                attempt = self.replace(path, end)
            else:
                attempt = self.recover(path)
            if attempt is not None:
                yield attempt

    def recover(self, path: list[int]) -> _Attempt | None:
        """Read a broom off the longest usable prefix of a stalled path.

        With k = 1 the stop level is 0, which a connected graph never reaches,
        so every k = 1 run ends here.
        """
        g, m = self.g, self.m
        for t in range(len(path), m - 2, -1):
            head = path[:t]
            on_path = set(head)
            for u in g.vertices:
                if u in on_path:
                    continue
                nb = tuple(p for p in head if p in g.neighbors(u))
                if len(nb) < m - 1 or not self.keeps(on_path | {u}):
                    continue
                self.log("recover", u=u, t=t, path_neighbours=len(nb))
                witness = BroomWitness(tuple(head), u, nb[len(nb) - (m - 1):] if m > 1 else ())
                return _Attempt(list(path), witness, nb, recovered=True)
        self.log("stall", reason="no-recovery", path=list(path))
        return None


# -- certificates ----------------------------------------------------------------------


def _certify(g, k, m, legs, method, broom: BroomWitness | None, smap, transcript) -> Certificate:
    cert = Certificate(
        n=g.order,
        digest=g.digest(),
        k=k,
        m=m,
        legs=legs,
        method=method,
        path=broom.path if broom else (),
        root=broom.root if broom else None,
        attachments=tuple(sorted(broom.attachments)) if broom else (),
        spider_map=smap,
        kappa_after=0,
        verified=False,
        transcript=transcript,
    )
    rest = delete_vertices(g, cert.witness_vertices())
    cert.kappa_after = vertex_connectivity(rest) if rest.order else 0
    cert.verified = cert.kappa_after >= k
    if not cert.verified:
        raise ExtractionFailed("internal: witness failed its own connectivity check", transcript)
    cert.seal = cert.compute_seal()
    return cert


def _single_vertex(g: Graph, k: int, kappa: int, exhaustive_limit: int) -> tuple[int, str]:
    if kappa == k:
        for end in find_ends(g, exhaustive_limit=exhaustive_limit):
            for v in end.fragment:
                if is_k_connected(delete_vertices(g, [v]), k):
                    return v, "greedy"
    for v in g.vertices:
        if is_k_connected(delete_vertices(g, [v]), k):
            return v, "greedy" if kappa > k else "fallback-oracle"
    raise ExtractionFailed("no single vertex keeps the connectivity")


def extract_broom(
    g: Graph,
    k: int,
    m: int,
    oracle_limit_override: int | None = None,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    restarts: int = RESTARTS,
) -> Certificate:
    """A broom W of order >= m with kappa(g - V(W)) >= k, certified."""
    kappa = _check_hypotheses(g, k, m)
    if m == 1:
        v, method = _single_vertex(g, k, kappa, exhaustive_limit)
        return _certify(g, k, 1, None, method, BroomWitness((), v, ()), None, [{"event": "single", "vertex": v}])
    run = _Greedy(g, k, m, exhaustive_limit, restarts)
    for attempt in run.brooms():
        return _certify(g, k, m, None, _method(attempt), attempt.broom, None, run.transcript)
    limit = oracle_limit() if oracle_limit_override is None else oracle_limit_override
    if g.order <= limit:
        found = brute_broom_removal(g, k, m, override=True)
        if found is not None:
            path, root = found
            nb = tuple(p for p in path if g.has_edge(root, p))
            run.log("fallback", vertices=sorted(path + [root]))
            broom = BroomWitness(tuple(path), root, nb[: m - 1])
            return _certify(g, k, m, None, "fallback-oracle", broom, None, run.transcript)
    raise ExtractionFailed("greedy search stalled and no fallback witness", run.transcript)


def _method(attempt: _Attempt) -> str:
    return "greedy+recovery" if attempt.recovered else "greedy+replacement"


def _spliced_broom(g: Graph, prefix: list[int], m: int) -> BroomWitness | None:
    sub = g.induced(prefix)
    root = min(prefix, key=lambda v: (-sub.degree(v), v))
    rest = tuple(v for v in prefix if v != root)
    if any(not g.has_edge(a, b) for a, b in zip(rest, rest[1:])):
        return None
    nb = tuple(v for v in rest if g.has_edge(root, v))
    if len(nb) < m - 1:
        return None
    return BroomWitness(rest, root, nb[len(nb) - (m - 1):])


def extract_spider(
    g: Graph,
    k: int,
    s: SpiderSpec,
    oracle_limit_override: int | None = None,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    restarts: int = RESTARTS,
) -> Certificate:
    """A copy T' of spider(s) in g with kappa(g - V(T')) >= k, certified.

    Route: greedy broom, then embed the spider at the broom root. If removing
    the spider alone breaks connectivity, other attachment choices are tried,
    then brooms re-read from path prefixes whose induced maximum degree has
    reached m - 1, then any spanning copy inside the broom vertices. The
    brute-force search is the last resort.
    """
    m = s.m
    kappa = _check_hypotheses(g, k, m)
    legs = s.legs
    if m == 1:
        v, method = _single_vertex(g, k, kappa, exhaustive_limit)
        broom = BroomWitness((), v, ())
        return _certify(g, k, 1, legs, method, broom, {ROOT: v}, [{"event": "single", "vertex": v}])

    run = _Greedy(g, k, m, exhaustive_limit, restarts)

    def works(vertices) -> bool:
        return run.keeps(vertices)

    for attempt in run.brooms():
        broom, path = attempt.broom, attempt.path
        nb = attempt.neighbours_on_path
        choices = [broom.attachments] + [
            c for c in islice(combinations(nb, m - 1), ATTACHMENT_TRIES) if c != broom.attachments
        ]
        for attach in choices:
            cand = BroomWitness(broom.path, broom.root, tuple(attach))
            smap = cand.spider_map(s)
            if works(smap.values()):
                run.log("case1", attachments=list(attach))
                return _certify(g, k, m, legs, _method(attempt), cand, smap, run.transcript)
        run.log("case1-failed", broom=list(broom.vertices))
        for i in range(1, len(path) + 1):
            prefix = path[:i]
            if i < m:
                continue
            sub = g.induced(prefix)
            if max(sub.degree(v) for v in prefix) < m - 1:
                continue
            spliced = _spliced_broom(g, prefix, m)
            if spliced is None:
                continue
            smap = spliced.spider_map(s)
            if works(smap.values()):
                run.log("case2", prefix_length=i, root=spliced.root)
                return _certify(g, k, m, legs, "greedy+reextraction", spliced, smap, run.transcript)
        pool = sorted(set(path) | {broom.root})
        for subset in combinations(pool, m):
            emb = find_spanning_spider(g.induced(subset), s)
            if emb is not None and works(subset):
                run.log("local", vertices=list(subset))
                return _certify(g, k, m, legs, "greedy+reextraction", None, emb, run.transcript)
        run.log("local-failed", pool=pool)

    limit = oracle_limit() if oracle_limit_override is None else oracle_limit_override
    if g.order <= limit:
        found = brute_spider_removal(g, k, s, override=True)
        if found is not None:
            run.log("fallback", vertices=list(found.vertices))
            return _certify(g, k, m, legs, "fallback-oracle", None, found.spider_map, run.transcript)
        raise ExtractionFailed("no spider witness exists (exhaustive search)", run.transcript)
    raise ExtractionFailed(f"greedy search stalled and order {g.order} exceeds oracle limit {limit}", run.transcript)


def certificate_from_oracle(g: Graph, k: int, s: SpiderSpec, witness) -> Certificate:
    """Certificate for a witness produced by the brute-force search."""
    return _certify(g, k, s.m, s.legs, "fallback-oracle", None, witness.spider_map, [])


