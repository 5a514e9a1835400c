"""Forman and Ollivier edge curvature with node- and network-level rollups.

Forman curvature of an edge is the closed form 4 - d_i - d_j + 3*t where t
counts the triangles through the edge. Ollivier curvature compares the
endpoint neighborhood measures by exact earth mover's distance over hop
costs: orc(i,j) = 1 - W1(mu_i, mu_j) for adjacent i, j. Ground distances are
taken from radius-3 truncated BFS runs out of each support point, which is
always sufficient because both supports sit within one hop of the edge.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .graph import Graph
from .transport import DiscreteMeasure, wasserstein1, wasserstein1_approx

KINDS = ("frc", "orc")

_COST_RADIUS = 3
_CACHE_CAP = 4096


@dataclass(frozen=True)
class MeasureConfig:
    """Neighborhood measure parameters for Ollivier curvature.

    ``alpha`` is the mass kept on the node itself; the remainder is split
    uniformly over its neighbors. The entropic approximation is opt-in: it is
    used only for edges whose larger endpoint degree reaches
    ``approx_degree_cutoff`` (None disables it entirely).
    """

    alpha: float = 0.0
    distribution: str = "uniform"
    approx_degree_cutoff: int | None = None
    approx_regularization: float = 1e-3

    def __post_init__(self):
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"alpha must be in [0, 1), got {self.alpha}")
        if self.distribution != "uniform":
            raise ValueError(f"unsupported distribution {self.distribution!r}")
        if self.approx_regularization <= 0:
            raise ValueError("approx_regularization must be > 0")

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "distribution": self.distribution,
            "approx_degree_cutoff": self.approx_degree_cutoff,
            "approx_regularization": self.approx_regularization,
        }


@dataclass
class CurvatureReport:
    """Per-edge curvature values for one network, in canonical edge order."""

    hsa_id: str
    year: int
    edges: tuple
    frc: tuple | None
    orc: tuple | None
    config: MeasureConfig
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def entries(self):
        """Yield (i, j, frc-or-None, orc-or-None) per edge."""
        for k, (i, j) in enumerate(self.edges):
            yield i, j, self.frc[k] if self.frc is not None else None, self.orc[k] if self.orc is not None else None

    def values(self, kind: str):
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
        return self.frc if kind == "frc" else self.orc

    def edge_position(self, i: int, j: int) -> int:
        if self._index is None:
            self._index = {e: k for k, e in enumerate(self.edges)}
        key = (i, j) if i < j else (j, i)
        try:
            return self._index[key]
        except KeyError:
            raise ValueError(f"({i},{j}) is not in the report") from None


def neighborhood_measure(g: Graph, v: int, config: MeasureConfig = MeasureConfig()) -> DiscreteMeasure:
    """Probability measure of node v: alpha on itself, the rest uniform on neighbors."""
    nbrs = g.neighbors(v)
    if not nbrs:
        raise ValueError(f"node {v} is isolated; it has no neighborhood measure")
    share = (1.0 - config.alpha) / len(nbrs)
    pairs = [(u, share) for u in nbrs]
    if config.alpha > 0.0:
        pairs.append((v, config.alpha))
        pairs.sort()
    return DiscreteMeasure.from_pairs(pairs)


def forman_edge(g: Graph, i: int, j: int) -> int:
    """4 - d_i - d_j + 3 * (triangles through the edge)."""
    t = g.triangles_on_edge(i, j)
    return 4 - g.degree(i) - g.degree(j) + 3 * t


def _truncated_distances(g: Graph, source: int, cache: dict | None):
    if cache is None:
        return g.bfs_distances(source, _COST_RADIUS)
    dist = cache.get(source)
    if dist is None:
        dist = g.bfs_distances(source, _COST_RADIUS)
        if len(cache) >= _CACHE_CAP:
            cache.pop(next(iter(cache)))
        cache[source] = dist
    return dist


def _cost_matrix(g: Graph, mu: DiscreteMeasure, nu: DiscreteMeasure, cache: dict | None):
    rows = []
    targets = nu.support
    for x in mu.support:
        dist = _truncated_distances(g, x, cache)
        try:
            rows.append([dist[y] for y in targets])
        except KeyError as exc:
            raise RuntimeError(
                f"support node {exc} not within {_COST_RADIUS} hops of {x}; graph inconsistent"
            ) from exc
    return rows


def _edge_ollivier(g: Graph, i: int, j: int, config: MeasureConfig, cache: dict | None) -> float:
    mu = neighborhood_measure(g, i, config)
    nu = neighborhood_measure(g, j, config)
    cost = _cost_matrix(g, mu, nu, cache)
    w1 = None
    cutoff = config.approx_degree_cutoff
    if cutoff is not None and max(g.degree(i), g.degree(j)) >= cutoff:
        approx = wasserstein1_approx(mu, nu, cost, config.approx_regularization)
        if approx.converged:
            w1 = approx.value
    if w1 is None:
        w1 = wasserstein1(mu, nu, cost)
    orc = 1.0 - w1
    # hop costs are capped at 3, so orc lies in [-2, 1] up to float dust
    if orc > 1.0:
        orc = 1.0
    elif orc < -2.0:
        orc = -2.0
    return orc


def ollivier_edge(g: Graph, i: int, j: int, config: MeasureConfig = MeasureConfig()) -> float:
    """Ollivier curvature 1 - W1(mu_i, mu_j) of an existing edge."""
    if not g.has_edge(i, j):
        raise ValueError(f"({i},{j}) is not an edge")
    return _edge_ollivier(g, i, j, config, None)


def _compute_range(g: Graph, kinds, config: MeasureConfig, start: int, stop: int, cache: dict | None):
    frc_vals = [] if "frc" in kinds else None
    orc_vals = [] if "orc" in kinds else None
    for k in range(start, stop):
        i, j = g.edges[k]
        if frc_vals is not None:
            frc_vals.append(forman_edge(g, i, j))
        if orc_vals is not None:
            orc_vals.append(_edge_ollivier(g, i, j, config, cache))
    return frc_vals, orc_vals


_POOL_STATE = {}


def _pool_init(graph, kinds, config):
    _POOL_STATE["graph"] = graph
    _POOL_STATE["kinds"] = kinds
    _POOL_STATE["config"] = config
    _POOL_STATE["cache"] = {}


def _pool_task(bounds):
    start, stop = bounds
    g = _POOL_STATE["graph"]
    frc_vals, orc_vals = _compute_range(g, _POOL_STATE["kinds"], _POOL_STATE["config"], start, stop, _POOL_STATE["cache"])
    return start, frc_vals, orc_vals


def curvature_all_edges(g: Graph, kinds=KINDS, config: MeasureConfig = MeasureConfig(), workers: int = 1) -> CurvatureReport:
    """Curvature of every edge; output is identical for any worker count.

    Edges are processed in canonical order, split into contiguous chunks when
    ``workers`` > 1. Results are reassembled by chunk offset, so the report
    never depends on scheduling.
    """
    kinds = tuple(sorted(set(kinds)))
    for kind in kinds:
        if kind not in KINDS:
            raise ValueError(f"unknown curvature kind {kind!r}")
    m = g.edge_count
    want_frc = "frc" in kinds
    want_orc = "orc" in kinds
    if m == 0 or workers <= 1 or m < 64:
        frc_vals, orc_vals = _compute_range(g, kinds, config, 0, m, {})
    else:
        chunk = max(1, -(-m // (workers * 4)))
        bounds = [(lo, min(lo + chunk, m)) for lo in range(0, m, chunk)]
        frc_vals = [None] * m if want_frc else None
        orc_vals = [None] * m if want_orc else None
        with ProcessPoolExecutor(max_workers=workers, initializer=_pool_init, initargs=(g, kinds, config)) as pool:
            for start, frc_part, orc_part in pool.map(_pool_task, bounds):
                if want_frc:
                    frc_vals[start : start + len(frc_part)] = frc_part
                if want_orc:
                    orc_vals[start : start + len(orc_part)] = orc_part
    return CurvatureReport(
        hsa_id=g.hsa_id,
        year=g.year,
        edges=g.edges,
        frc=tuple(frc_vals) if want_frc else None,
        orc=tuple(orc_vals) if want_orc else None,
        config=config,
    )


def node_curvature(report: CurvatureReport, g: Graph, v: int, kind: str):
    """Mean curvature of the edges incident to v; None for isolated nodes."""
    values = report.values(kind)
    if values is None:
        return None
    nbrs = g.neighbors(v)
    if not nbrs:
        return None
    picked = [values[report.edge_position(v, u)] for u in nbrs]
    return math.fsum(picked) / len(picked)


def _median(sorted_vals):
    n = len(sorted_vals)
    mid = n // 2
    if n % 2:
        return sorted_vals[mid]
    return (sorted_vals[mid - 1] + sorted_vals[mid]) / 2.0


def network_curvature_summary(report: CurvatureReport, kind: str) -> dict:
    """Distribution statistics of one curvature kind over the whole network.

    Returns mean/median/std/min/max/frac_negative/count; everything except
    ``count`` is None when there are no values. Std is the population
    standard deviation; the median of an even count is the midpoint of the
    two central values.
    """
    values = report.values(kind)
    values = [float(x) for x in values] if values is not None else []
    if not values:
        return {"mean": None, "median": None, "std": None, "min": None, "max": None, "frac_negative": None, "count": 0}
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((x - mean) ** 2 for x in values) / n
    ordered = sorted(values)
    return {
        "mean": mean,
        "median": _median(ordered),
        "std": math.sqrt(var),
        "min": ordered[0],
        "max": ordered[-1],
        "frac_negative": sum(1 for x in values if x < 0) / n,
        "count": n,
    }
