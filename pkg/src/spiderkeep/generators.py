"""Graph families for tests and corpora.

All randomness flows from a ``random.Random`` seeded by the corpus spec, so
an identical spec always yields an identical graph stream.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator

from .connectivity import is_k_connected
from .errors import BadParameters, GenerationBudgetExceeded
from .graph import Graph, dump_graph, min_degree

FAMILIES = ("glue", "circulant", "random")
ATTEMPT_BUDGET = 10_000


def glue_cliques(q1: int, q2: int, c: int) -> Graph:
    """Two cliques K_q1 and K_q2 sharing exactly c vertices.

    Labels: the private side of the first clique, then the shared vertices,
    then the private side of the second.
    """
    if q1 < 2 or q2 < 2 or not 1 <= c <= min(q1, q2) - 1:
        raise BadParameters(f"glue_cliques needs q1, q2 >= 2 and 1 <= c < min(q1, q2); got {q1}, {q2}, {c}")
    n = q1 + q2 - c
    first = range(q1)
    second = range(q1 - c, n)
    edges = set(combinations(first, 2)) | set(combinations(second, 2))
    return Graph.from_edges(n, sorted(edges))


def circulant(n: int, offsets: Iterable[int]) -> Graph:
    offsets = set(offsets)
    if n < 1 or not offsets or any(not 1 <= o <= n // 2 for o in offsets):
        raise BadParameters(f"circulant offsets must lie in 1..{n // 2}")
    edges = {tuple(sorted((i, (i + o) % n))) for i in range(n) for o in offsets}
    return Graph.from_edges(n, sorted(edges))


@dataclass(frozen=True)
class CorpusSpec:
    family: str
    n: tuple[int, int]
    k: int
    delta_min: int
    count: int
    seed: int = 0
    # random: edge probability range; glue: fraction of edges that may be dropped
    p: tuple[float, float] | None = None
    drop: float = 0.15
    allow_complete: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BadParameters(f"unknown family {self.family!r}")
        lo, hi = self.n
        if lo < 1 or hi < lo or self.k < 0 or self.count < 0:
            raise BadParameters(f"bad corpus parameters {self}")

    @property
    def corpus_id(self) -> str:
        lo, hi = self.n
        size = f"{lo}" if lo == hi else f"{lo}..{hi}"
        return f"{self.family}-n{size}-k{self.k}-d{self.delta_min}-c{self.count}-s{self.seed}"

    def to_line(self) -> str:
        lo, hi = self.n
        parts = [
            f"family={self.family}",
            f"n={lo}" if lo == hi else f"n={lo}..{hi}",
            f"k={self.k}",
            f"delta_min={self.delta_min}",
            f"count={self.count}",
            f"seed={self.seed}",
        ]
        if self.p is not None:
            parts.append(f"p={self.p[0]}..{self.p[1]}")
        if self.family == "glue":
            parts.append(f"drop={self.drop}")
        return " ".join(parts)


def _int_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    return int(text), int(text)


def parse_spec_line(line: str) -> CorpusSpec:
    """Parse ``family=random n=10..14 k=2 delta_min=5 count=50 seed=7``."""
    fields = {}
    for token in line.split():
        if "=" not in token:
            raise BadParameters(f"manifest token {token!r} is not key=value")
        key, value = token.split("=", 1)
        fields[key] = value
    try:
        p = None
        if "p" in fields:
            lo, _, hi = fields["p"].partition("..")
            p = (float(lo), float(hi or lo))
        return CorpusSpec(
            family=fields["family"],
            n=_int_range(fields["n"]),
            k=int(fields.get("k", 1)),
            delta_min=int(fields.get("delta_min", 0)),
            count=int(fields.get("count", 1)),
            seed=int(fields.get("seed", 0)),
            p=p,
            drop=float(fields.get("drop", 0.15)),
            allow_complete=fields.get("allow_complete", "false").lower() in ("1", "true", "yes"),
        )
    except KeyError as exc:
        raise BadParameters(f"manifest line missing {exc.args[0]!r}") from None
    except ValueError as exc:
        raise BadParameters(f"manifest line {line!r}: {exc}") from None


def parse_manifest(text: str) -> list[CorpusSpec]:
    specs = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            specs.append(parse_spec_line(line))
    return specs


def _accept(g: Graph, spec: CorpusSpec) -> bool:
    if g.order == 0 or min_degree(g) < spec.delta_min:
        return False
    if g.is_complete() and not spec.allow_complete:
        return False
    return is_k_connected(g, spec.k)


def _random_graph(rng: random.Random, n: int, spec: CorpusSpec) -> Graph:
    if spec.p is not None:
        p_lo, p_hi = spec.p
    else:
        p_lo = min(0.9, (spec.delta_min + 1) / max(n - 1, 1))
        p_hi = min(0.97, p_lo + 0.35)
    p = rng.uniform(p_lo, p_hi)
    edges = [e for e in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


def _glue_graph(rng: random.Random, n_hi: int, spec: CorpusSpec) -> Graph | None:
    c = max(spec.k, 1)
    q_min = max(spec.delta_min + 1, c + 1, 2)
    if 2 * q_min - c > n_hi:
        return None
    q1 = rng.randint(q_min, n_hi - q_min + c)
    q2 = rng.randint(q_min, n_hi - q1 + c)
    g = glue_cliques(q1, q2, c)
    drop = rng.uniform(0, spec.drop)
    kept = [e for e in g.edges() if rng.random() >= drop]
    return Graph.from_edges(g.order, kept)


def _circulant_graph(rng: random.Random, n: int, spec: CorpusSpec) -> Graph:
    choices = list(range(1, n // 2 + 1))
    size = rng.randint(1, len(choices))
    return circulant(n, rng.sample(choices, size))


def random_corpus(spec: CorpusSpec, budget: int = ATTEMPT_BUDGET) -> Iterator[Graph]:
    """Graphs with kappa >= k and min degree >= delta_min, by rejection sampling."""
    rng = random.Random(spec.seed)
    lo, hi = spec.n
    if spec.delta_min > hi - 1:
        raise GenerationBudgetExceeded(f"delta_min {spec.delta_min} impossible with n <= {hi}")
    for _ in range(spec.count):
        for _attempt in range(budget):
            n = rng.randint(max(lo, spec.delta_min + 1), hi)
            if spec.family == "random":
                g = _random_graph(rng, n, spec)
            elif spec.family == "glue":
                g = _glue_graph(rng, hi, spec)
                if g is None:
                    raise GenerationBudgetExceeded(f"no glued cliques fit n <= {hi} with delta_min {spec.delta_min}")
            else:
                g = _circulant_graph(rng, n, spec)
            if _accept(g, spec):
                yield g
                break
        else:
            raise GenerationBudgetExceeded(f"no admissible graph within {budget} attempts")


def write_corpus(graphs: Iterable[Graph], directory: str | Path) -> list[Path]:
    """Write each graph as ``<digest>.el``; returns the written paths."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for g in graphs:
        path = out / f"{g.digest()}.el"
        path.write_text(dump_graph(g))
        paths.append(path)
    return paths
