"""Delimited summaries and matplotlib figures for validation runs."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .graph import Graph  # noqa: E402

COLUMNS = ["corpus", "k", "m", "graphs", "skipped", "instances", "failures", "greedy_rate"]
METHOD_COLOURS = {
    "greedy": "#2e86ab",
    "greedy+replacement": "#3fa34d",
    "greedy+recovery": "#a1c181",
    "greedy+reextraction": "#f6ae2d",
    "fallback-oracle": "#e4572e",
}


def summary_table(reports: Sequence, delimiter: str = "\t") -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, delimiter=delimiter, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        writer.writerow(r.summary_row())
    return buf.getvalue()


def _style(ax, title: str) -> None:
    ax.set_title(title, fontsize=11)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)


def plot_methods(reports: Sequence, path: str | Path) -> Path:
    """Stacked bars: how each (k, m) run was solved."""
    labels = [f"k={r.k}\nm={r.m}" for r in reports]
    fig, ax = plt.subplots(figsize=(max(5, 0.6 * len(reports) + 2), 3.6))
    bottom = [0] * len(reports)
    for method, colour in METHOD_COLOURS.items():
        counts = [r.methods.get(method, 0) for r in reports]
        if not any(counts):
            continue
        ax.bar(labels, counts, bottom=bottom, color=colour, label=method, width=0.7)
        bottom = [b + c for b, c in zip(bottom, counts)]
    failures = [len(r.failures) for r in reports]
    if any(failures):
        ax.bar(labels, failures, bottom=bottom, color="black", label="failed", width=0.7)
    ax.set_ylabel("instances")
    ax.legend(fontsize=7, frameon=False, ncol=2)
    _style(ax, "extraction route per instance")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_greedy_rate(reports: Sequence, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ks = sorted({r.k for r in reports})
    for k in ks:
        rows = sorted((r for r in reports if r.k == k), key=lambda r: r.m)
        ax.plot([r.m for r in rows], [r.greedy_success_rate for r in rows], marker="o", label=f"k={k}")
    ax.set_xlabel("spider order m")
    ax.set_ylabel("solved without fallback")
    ax.set_ylim(-0.05, 1.05)
    ax.legend(frameon=False, fontsize=8)
    _style(ax, "greedy success rate")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_certificate(g: Graph, cert, path: str | Path) -> Path:
    """Circular drawing of ``g`` with the certified witness highlighted."""
    from .export import witness_edges

    n = g.order
    pos = {
        v: (math.cos(2 * math.pi * i / max(n, 1)), math.sin(2 * math.pi * i / max(n, 1)))
        for i, v in enumerate(g.vertices)
    }
    marked = witness_edges(cert)
    chosen = set(cert.witness_vertices())
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    for u, v in g.edges():
        hot = (u, v) in marked
        ax.plot(
            [pos[u][0], pos[v][0]],
            [pos[u][1], pos[v][1]],
            color="#e4572e" if hot else "#bbbbbb",
            lw=2.4 if hot else 0.7,
            zorder=2 if hot else 1,
        )
    for v, (x, y) in pos.items():
        ax.scatter([x], [y], s=260, color="#e4572e" if v in chosen else "white", edgecolors="black", zorder=3)
        ax.text(x, y, str(v), ha="center", va="center", fontsize=8, zorder=4)
    legs = ",".join(map(str, cert.legs)) if cert.legs else "-"
    ax.set_title(f"k={cert.k} legs={legs} kappa_after={cert.kappa_after}", fontsize=10)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_validation_figures(reports: Sequence, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return [plot_methods(reports, out / "methods.png"), plot_greedy_rate(reports, out / "greedy_rate.png")]
