"""Brute-force ground truth at desk scale.

Nothing here uses the flow machinery: connectivity is the definitional
"smallest disconnecting set", and spider removal is plain subset enumeration.
"""

from __future__ import annotations

import os
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Iterable

from .errors import OrderMismatch, SpiderkeepError, TooLarge
from .graph import Graph, connected_components, delete_vertices, min_degree
from .spider import ROOT, SpiderSpec, SpiderVertex, enumerate_spider_specs

KAPPA_LIMIT = 12
ORACLE_LIMIT = 18


def oracle_limit() -> int:
    """Order guard for spider search; SPIDERKEEP_ORACLE_LIMIT overrides it."""
    value = os.environ.get("SPIDERKEEP_ORACLE_LIMIT")
    return int(value) if value else ORACLE_LIMIT


def _fragmented(g: Graph, removed: Iterable[int]) -> bool:
    removed = set(removed)
    if g.order - len(removed) <= 1:
        return True
    return len(connected_components(g, removed)) > 1


def brute_kappa(g: Graph, override: bool = False) -> int:
    """Smallest T with g - T disconnected or trivial."""
    if g.order > KAPPA_LIMIT and not override:
        raise TooLarge(f"brute_kappa guard: order {g.order} > {KAPPA_LIMIT}")
    if g.order == 0:
        raise SpiderkeepError("connectivity of the empty graph")
    for size in range(g.order):
        for removed in combinations(g.vertices, size):
            if _fragmented(g, removed):
                return size
    return g.order - 1


def _brute_k_connected(g: Graph, k: int) -> bool:
    if g.order <= k:
        return False
    for size in range(k):
        for removed in combinations(g.vertices, size):
            if _fragmented(g, removed):
                return False
    return True


def find_spanning_spider(
    h: Graph, s: SpiderSpec, roots: Iterable[int] | None = None
) -> dict[SpiderVertex, int] | None:
    """A spanning copy of spider(s) in ``h`` as a spider-vertex map, or None.

    Backtracks over the root image (all vertices unless ``roots`` is given)
    and then over leg paths, longest leg first.
    """
    if h.order != s.m:
        raise OrderMismatch(f"graph order {h.order} != spider order {s.m}")
    legs = s.legs
    for r in sorted(roots) if roots is not None else h.vertices:
        emb = {ROOT: r}
        if _place_leg(h, legs, 0, r, {r}, emb, min_start=None):
            return emb
    return None


def _place_leg(h, legs, i, root, used, emb, min_start) -> bool:
    if i == len(legs):
        return True
    ell = legs[i]
    # equal consecutive legs are interchangeable: order their first vertices
    floor = min_start if i > 0 and legs[i - 1] == ell else None
    for first in sorted(h.neighbors(root)):
        if first in used or (floor is not None and first <= floor):
            continue
        path = [first]
        used.add(first)
        if _extend(h, legs, i, root, used, emb, path, ell):
            return True
        used.discard(first)
    return False


def _extend(h, legs, i, root, used, emb, path, ell) -> bool:
    if len(path) == ell:
        for j, v in enumerate(path, 1):
            emb[(i + 1, j)] = v
        if _place_leg(h, legs, i + 1, root, used, emb, path[0]):
            return True
        for j in range(1, ell + 1):
            del emb[(i + 1, j)]
        return False
    for nxt in sorted(h.neighbors(path[-1])):
        if nxt in used:
            continue
        used.add(nxt)
        path.append(nxt)
        if _extend(h, legs, i, root, used, emb, path, ell):
            return True
        path.pop()
        used.discard(nxt)
    return False


def spanning_spider_check(h: Graph, s: SpiderSpec) -> bool:
    return find_spanning_spider(h, s) is not None


@dataclass(frozen=True)
class OracleWitness:
    vertices: tuple[int, ...]
    spider_map: dict


def _colex(items, size: int):
    """Size-subsets of ``items`` (ascending) in colex order: compare largest element first."""
    if size == 0:
        yield ()
        return
    for top in range(size - 1, len(items)):
        for rest in _colex(items[:top], size - 1):
            yield rest + (items[top],)


def brute_spider_removal(
    g: Graph, k: int, s: SpiderSpec, override: bool = False, limit: int | None = None
) -> OracleWitness | None:
    """Colex-least m-set U carrying a spanning spider(s) with kappa(g - U) >= k."""
    limit = oracle_limit() if limit is None else limit
    if g.order > limit and not override:
        raise TooLarge(f"spider oracle guard: order {g.order} > {limit}")
    m = s.m
    for subset in _colex(g.vertices, m):
        sub = set(subset)
        edges = sum(len(g.neighbors(v) & sub) for v in subset) // 2
        if edges < m - 1:
            continue
        emb = find_spanning_spider(g.induced(subset), s)
        if emb is None:
            continue
        if _brute_k_connected(delete_vertices(g, subset), k):
            return OracleWitness(tuple(subset), emb)
    return None


def _hamiltonian_path(h: Graph) -> list[int] | None:
    vs = h.vertices
    if not vs:
        return []

    def grow(path, used):
        if len(path) == len(vs):
            return list(path)
        for nxt in sorted(h.neighbors(path[-1])):
            if nxt not in used:
                used.add(nxt)
                path.append(nxt)
                found = grow(path, used)
                if found:
                    return found
                path.pop()
                used.discard(nxt)
        return None

    for start in vs:
        found = grow([start], {start})
        if found:
            return found
    return None


def brute_broom_removal(
    g: Graph, k: int, m: int, extra: int = 3, override: bool = False, limit: int | None = None
):
    """Smallest broom (path, root) with at least m - 1 root attachments and kappa(g - broom) >= k.

    Tries broom orders m .. m + extra. Returns (path, root) or None.
    """
    limit = oracle_limit() if limit is None else limit
    if g.order > limit and not override:
        raise TooLarge(f"broom oracle guard: order {g.order} > {limit}")
    for size in range(m, min(g.order - 1, m + extra) + 1):
        for subset in combinations(g.vertices, size):
            for root in subset:
                rest = [v for v in subset if v != root]
                if len(g.neighbors(root) & set(rest)) < m - 1:
                    continue
                path = _hamiltonian_path(g.induced(rest))
                if path is None:
                    continue
                if _brute_k_connected(delete_vertices(g, subset), k):
                    return path, root
    return None


# -- corpus validation ---------------------------------------------------------------


@dataclass
class OracleReport:
    corpus_id: str
    k: int
    m: int
    graphs_checked: int = 0
    instances: int = 0
    greedy_successes: int = 0
    failures: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    methods: dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def greedy_success_rate(self) -> float:
        return self.greedy_successes / self.instances if self.instances else 1.0

    def to_dict(self) -> dict:
        d = asdict(self)
        # wall time is left out so reports are reproducible byte for byte
        del d["seconds"]
        d["greedy_success_rate"] = self.greedy_success_rate
        return d

    def summary_row(self) -> dict:
        return {
            "corpus": self.corpus_id,
            "k": self.k,
            "m": self.m,
            "graphs": self.graphs_checked,
            "skipped": len(self.skipped),
            "instances": self.instances,
            "failures": len(self.failures),
            "greedy_rate": f"{self.greedy_success_rate:.4f}",
        }


def _validate_graph(g: Graph, k: int, m: int, specs: list[SpiderSpec]) -> dict:
    from .connectivity import vertex_connectivity
    from .extraction import degree_threshold, extract_spider, verify_certificate

    digest = g.digest()
    threshold = degree_threshold(k, m)
    if g.order == 0 or g.is_complete():
        return {"skipped": {"digest": digest, "note": "complete or empty"}}
    if vertex_connectivity(g) < k:
        return {"skipped": {"digest": digest, "note": f"kappa < {k}"}}
    if min_degree(g) < threshold:
        return {"skipped": {"digest": digest, "note": f"min degree < {threshold}"}}
    out: dict = {"methods": [], "failures": []}
    for s in specs:
        try:
            cert = extract_spider(g, k, s)
        except SpiderkeepError as exc:
            try:
                found = brute_spider_removal(g, k, s, override=True) is not None
            except SpiderkeepError:
                found = None
            out["failures"].append(
                {"digest": digest, "legs": list(s.legs), "reason": exc.reason, "oracle_found": found}
            )
            continue
        verdict = verify_certificate(g, k, cert)
        if not verdict.ok:
            out["failures"].append(
                {"digest": digest, "legs": list(s.legs), "reason": "verify:" + ",".join(verdict.reasons)}
            )
            continue
        out["methods"].append(cert.method)
    return out


def validate_corpus(
    corpus: Iterable[Graph],
    k: int,
    m: int,
    corpus_id: str = "corpus",
    specs: list[SpiderSpec] | None = None,
    jobs: int = 1,
) -> OracleReport:
    """Run spider extraction for every spec of order m on every admissible graph.

    Graphs that do not meet the hypotheses are skipped with a note. Extraction
    failures are cross-checked against the brute-force search. With
    ``jobs > 1`` graphs are processed in worker processes; the report is
    identical to a sequential run apart from ``seconds``.
    """
    specs = enumerate_spider_specs(m) if specs is None else specs
    report = OracleReport(corpus_id, k, m)
    start = time.perf_counter()
    graphs = list(corpus)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_validate_graph, graphs, [k] * len(graphs), [m] * len(graphs), [specs] * len(graphs)))
    else:
        parts = [_validate_graph(g, k, m, specs) for g in graphs]
    for part in parts:
        if "skipped" in part:
            report.skipped.append(part["skipped"])
            continue
        report.graphs_checked += 1
        report.instances += len(part["methods"]) + len(part["failures"])
        report.failures += part["failures"]
        for method in part["methods"]:
            report.methods[method] = report.methods.get(method, 0) + 1
            if method != "fallback-oracle":
                report.greedy_successes += 1
    report.methods = dict(sorted(report.methods.items()))
    report.seconds = time.perf_counter() - start
    return report
