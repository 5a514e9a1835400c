"""Matplotlib rendering for report output: network, distribution, scatter panels.

Everything draws to files through the Agg backend. Network panels follow the
explorer conventions: node size by betweenness, node color by degree, edge
width by retained weight, edge color on a diverging scale centered at zero so
negative curvature reads cool and positive warm.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import TwoSlopeNorm
from matplotlib.lines import Line2D

from .graph import Graph

EDGE_CMAP = "coolwarm"


def spring_layout(g: Graph, seed: int = 7, iterations: int = 60) -> np.ndarray:
    """Deterministic force-directed positions (seeded init, fixed iteration count)."""
    n = g.node_count
    if n == 0:
        return np.zeros((0, 2))
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2)) * 2.0 - 1.0
    if n == 1:
        return pos
    k = 1.0 / math.sqrt(n)
    edges = np.asarray(g.edges, dtype=int) if g.edge_count else np.zeros((0, 2), dtype=int)
    temperature = 0.1
    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(delta, axis=-1)
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-6)
        force = (k * k / dist**2)[:, :, None] * delta
        disp = force.sum(axis=1)
        if len(edges):
            dvec = pos[edges[:, 0]] - pos[edges[:, 1]]
            dlen = np.maximum(np.linalg.norm(dvec, axis=1, keepdims=True), 1e-6)
            pull = dvec * (dlen / k)
            np.add.at(disp, edges[:, 0], -pull)
            np.add.at(disp, edges[:, 1], pull)
        length = np.maximum(np.linalg.norm(disp, axis=1, keepdims=True), 1e-6)
        pos = pos + disp / length * np.minimum(length, temperature)
        temperature *= 0.95
    span = pos.max(axis=0) - pos.min(axis=0)
    span[span == 0] = 1.0
    return (pos - pos.min(axis=0)) / span


def save_network_figure(g: Graph, report, node_metrics: dict | None, path, seed: int = 7):
    """One network drawn with the explorer encodings; returns the output path."""
    pos = spring_layout(g, seed=seed)
    fig, ax = plt.subplots(figsize=(7, 7))
    orc = list(report.orc) if report is not None and report.orc is not None else None
    norm = TwoSlopeNorm(vmin=-2.0, vcenter=0.0, vmax=1.0)
    cmap = plt.get_cmap(EDGE_CMAP)
    weights = np.asarray(g.edge_weights, dtype=float)
    wmax = weights.max() if len(weights) else 1.0
    for idx, (i, j) in enumerate(g.edges):
        color = cmap(norm(orc[idx])) if orc is not None else "0.6"
        width = 0.5 + 2.5 * (weights[idx] / wmax)
        ax.add_line(
            Line2D([pos[i, 0], pos[j, 0]], [pos[i, 1], pos[j, 1]], color=color, linewidth=width, zorder=1, alpha=0.9)
        )
    degrees = np.array([g.degree(v) for v in range(g.node_count)], dtype=float)
    if node_metrics and "betweenness" in node_metrics:
        betweenness = np.asarray(node_metrics["betweenness"], dtype=float)
    else:
        betweenness = np.zeros(g.node_count)
    sizes = 40 + 360 * (betweenness / betweenness.max() if betweenness.max() > 0 else betweenness)
    scatter = ax.scatter(pos[:, 0], pos[:, 1], s=sizes, c=degrees, cmap="viridis", zorder=2, edgecolors="white", linewidths=0.5)
    fig.colorbar(scatter, ax=ax, shrink=0.75, label="degree")
    if orc is not None:
        fig.colorbar(plt.cm.ScalarMappable(norm=norm, cmap=cmap), ax=ax, shrink=0.75, label="edge curvature (orc)")
    ax.set_title(f"{g.hsa_id} / {g.year}: {g.node_count} providers, {g.edge_count} links")
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _region_colors(groups, region_of_group):
    regions = sorted({region_of_group.get(g, "unassigned") for g in groups})
    cmap = plt.get_cmap("tab10")
    lookup = {region: cmap(k % 10) for k, region in enumerate(regions)}
    return [lookup[region_of_group.get(g, "unassigned")] for g in groups], lookup


def save_distribution_figure(summaries, metric: str, path, region_of_group: dict | None = None):
    """Box panel per group from precomputed distribution summaries."""
    region_of_group = region_of_group or {}
    groups = [s["group"] for s in summaries]
    stats = [
        {
            "label": s["group"],
            "med": s["median"],
            "q1": s["q1"],
            "q3": s["q3"],
            "whislo": s["whisker_lo"],
            "whishi": s["whisker_hi"],
            "fliers": [],
        }
        for s in summaries
    ]
    colors, lookup = _region_colors(groups, region_of_group)
    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(groups) + 2), 5))
    artists = ax.bxp(stats, showfliers=False, patch_artist=True)
    for patch, color in zip(artists["boxes"], colors):
        patch.set_facecolor(color)
        patch.set_alpha(0.75)
    ax.set_ylabel(metric)
    ax.set_xlabel("group")
    ax.tick_params(axis="x", rotation=90)
    ax.axhline(0.0, color="0.5", linewidth=0.8, linestyle="--")
    if region_of_group:
        handles = [Line2D([], [], marker="s", linestyle="", color=c, label=r) for r, c in sorted(lookup.items())]
        ax.legend(handles=handles, fontsize=8, title="region", loc="best")
    ax.set_title(f"{metric} distribution by group")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_scatter_figure(rows, x: str, y: str, group_col: str | None, results, path, size_col: str = "node_count"):
    """Correlation scatter: per-group colors, point size by network size, r badges."""
    fig, ax = plt.subplots(figsize=(7, 5.5))
    clean = [r for r in rows if isinstance(r.get(x), (int, float)) and isinstance(r.get(y), (int, float))]
    groups = sorted({str(r.get(group_col)) for r in clean}) if group_col else ["all"]
    cmap = plt.get_cmap("tab10")
    sizes_all = [r.get(size_col) or 1 for r in clean]
    smax = max(sizes_all) if sizes_all else 1
    for k, gname in enumerate(groups):
        sel = [r for r in clean if not group_col or str(r.get(group_col)) == gname]
        if not sel:
            continue
        xs = [r[x] for r in sel]
        ys = [r[y] for r in sel]
        sizes = [20 + 180 * ((r.get(size_col) or 1) / smax) for r in sel]
        ax.scatter(xs, ys, s=sizes, color=cmap(k % 10), alpha=0.7, label=gname, edgecolors="white", linewidths=0.4)
    badges = []
    for res in results:
        label = "all" if res.group is None else "/".join(str(v) for v in res.group)
        p_txt = "" if res.p_value is None else f", p={res.p_value:.3g}"
        badges.append(f"{label}: r={res.coefficient:.3f} (n={res.n}{p_txt})")
    if badges:
        ax.text(
            0.02,
            0.98,
            "\n".join(badges),
            transform=ax.transAxes,
            fontsize=8,
            va="top",
            bbox={"boxstyle": "round", "facecolor": "white", "alpha": 0.8},
        )
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    if group_col:
        ax.legend(fontsize=8, title=group_col, loc="lower right")
    ax.set_title(f"{y} vs {x}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
