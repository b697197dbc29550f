"""DOT export with witness highlighting."""

from __future__ import annotations

from .graph import Graph


def witness_edges(cert) -> set[tuple[int, int]]:
    """Edges of the certified subgraph (spider edges, else broom edges)."""
    from .spider import spec_from_legs

    edges = set()
    if cert.spider_map is not None and cert.legs is not None:
        s = spec_from_legs(cert.legs)
        for a, b in s.edges():
            u, v = cert.spider_map[a], cert.spider_map[b]
            edges.add((min(u, v), max(u, v)))
        return edges
    for u, v in zip(cert.path, cert.path[1:]):
        edges.add((min(u, v), max(u, v)))
    if cert.root is not None:
        for a in cert.attachments:
            edges.add((min(cert.root, a), max(cert.root, a)))
    return edges


def to_dot(g: Graph, cert=None, name: str = "G") -> str:
    highlighted = set(cert.witness_vertices()) if cert is not None else set()
    marked = witness_edges(cert) if cert is not None else set()
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for v in g.vertices:
        if v in highlighted:
            lines.append(f'  {v} [style=filled, fillcolor="#e4572e"];')
        else:
            lines.append(f"  {v};")
    for u, v in g.edges():
        if (u, v) in marked:
            lines.append(f'  {u} -- {v} [color="#e4572e", penwidth=2.5];')
        else:
            lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
