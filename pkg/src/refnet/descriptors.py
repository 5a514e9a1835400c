"""Classical network descriptors: density, clustering, assortativity, centrality."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

from .graph import Graph

_BETWEENNESS_CHUNK = 64


@dataclass(frozen=True)
class DescriptorRow:
    """One network's descriptor values; None marks an undefined statistic."""

    node_count: int
    edge_count: int
    density: float | None
    global_clustering: float | None
    mean_local_clustering: float | None
    degree_assortativity: float | None
    component_count: int
    largest_component_fraction: float | None
    mean_degree: float | None
    max_degree: int | None
    mean_degree_centrality: float | None
    max_degree_centrality: float | None
    mean_betweenness: float | None
    max_betweenness: float | None

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def density(g: Graph):
    """2|E| / (|V| (|V|-1)); None below two nodes."""
    n = g.node_count
    if n < 2:
        return None
    return 2.0 * g.edge_count / (n * (n - 1))


def local_clustering(g: Graph, v: int) -> float:
    """Fraction of neighbor pairs of v that are themselves adjacent; 0 when deg < 2."""
    d = g.degree(v)
    if d < 2:
        return 0.0
    links = 0
    for u in g.neighbors(v):
        links += g.triangles_on_edge(v, u)
    return links / (d * (d - 1))


def global_clustering(g: Graph):
    """Transitivity: 3 * triangles / connected triples; None without any triple."""
    triples = sum(d * (d - 1) // 2 for d in map(g.degree, range(g.node_count)))
    if triples == 0:
        return None
    closed = sum(g.triangles_on_edge(i, j) for i, j in g.edges)  # each triangle counted 3x
    return closed / triples


def degree_assortativity(g: Graph):
    """Pearson correlation of degrees across the 2|E| ordered edge ends.

    None when there are no edges or either marginal variance vanishes
    (regular graphs), rather than fabricating a correlation.
    """
    if g.edge_count == 0:
        return None
    deg = [g.degree(v) for v in range(g.node_count)]
    sx = sy = sxy = sxx = syy = 0.0
    for i, j in g.edges:
        di, dj = deg[i], deg[j]
        sx += di + dj
        sy += dj + di
        sxy += 2.0 * di * dj
        sxx += di * di + dj * dj
        syy += dj * dj + di * di
    n = 2.0 * g.edge_count
    cov = sxy / n - (sx / n) * (sy / n)
    varx = sxx / n - (sx / n) ** 2
    vary = syy / n - (sy / n) ** 2
    if varx <= 1e-15 or vary <= 1e-15:
        return None
    r = cov / math.sqrt(varx * vary)
    return min(1.0, max(-1.0, r))


def degree_centrality(g: Graph, v: int):
    """deg(v) / (|V|-1); None below two nodes."""
    n = g.node_count
    if n < 2:
        return None
    return g.degree(v) / (n - 1)


def _betweenness_chunk(g: Graph, start: int, stop: int) -> list:
    """Brandes dependency sums accumulated over sources start..stop-1."""
    n = g.node_count
    bc = [0.0] * n
    for s in range(start, stop):
        stack = []
        preds = [[] for _ in range(n)]
        sigma = [0] * n
        dist = [-1] * n
        sigma[s] = 1
        dist[s] = 0
        queue = [s]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            stack.append(v)
            dv = dist[v]
            sv = sigma[v]
            for w in g.adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sv
                    preds[w].append(v)
        delta = [0.0] * n
        for w in reversed(stack):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    return bc


_BC_GRAPH = None


def _bc_pool_init(graph):
    global _BC_GRAPH
    _BC_GRAPH = graph


def _bc_pool_task(bounds):
    return _betweenness_chunk(_BC_GRAPH, *bounds)


def betweenness_centrality(g: Graph, workers: int = 1) -> list:
    """Exact shortest-path betweenness per node, normalized to [0, 1].

    Brandes accumulation over every source; undirected pair counts are halved
    and divided by (n-1)(n-2)/2. No sampling. Sources split into fixed-size
    chunks whose partial sums are added in chunk order, so the result is
    bit-identical for any worker count.
    """
    n = g.node_count
    bounds = [(lo, min(lo + _BETWEENNESS_CHUNK, n)) for lo in range(0, n, _BETWEENNESS_CHUNK)]
    if workers <= 1 or len(bounds) <= 1:
        partials = [_betweenness_chunk(g, lo, hi) for lo, hi in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_bc_pool_init, initargs=(g,)) as pool:
            partials = list(pool.map(_bc_pool_task, bounds))
    bc = [0.0] * n
    for part in partials:
        for v in range(n):
            bc[v] += part[v]
    norm = (n - 1) * (n - 2) / 2.0 if n >= 3 else 1.0
    return [x / 2.0 / norm for x in bc]


def descriptor_row(g: Graph) -> DescriptorRow:
    """All descriptors for one network; fields are None where undefined."""
    n = g.node_count
    degrees = [g.degree(v) for v in range(n)]
    labels, comp_count = g.connected_components()
    if n:
        comp_sizes = [0] * comp_count
        for lbl in labels:
            comp_sizes[lbl] += 1
        largest_frac = max(comp_sizes) / n
        mean_deg = sum(degrees) / n
        max_deg = max(degrees)
        local = [local_clustering(g, v) for v in range(n)]
        mean_local = math.fsum(local) / n
        bc = betweenness_centrality(g)
        mean_bc = math.fsum(bc) / n
        max_bc = max(bc)
    else:
        largest_frac = mean_deg = max_deg = mean_local = mean_bc = max_bc = None
    if n >= 2:
        dc = [d / (n - 1) for d in degrees]
        mean_dc = math.fsum(dc) / n
        max_dc = max(dc)
    else:
        mean_dc = max_dc = None
    return DescriptorRow(
        node_count=n,
        edge_count=g.edge_count,
        density=density(g),
        global_clustering=global_clustering(g),
        mean_local_clustering=mean_local,
        degree_assortativity=degree_assortativity(g),
        component_count=comp_count,
        largest_component_fraction=largest_frac,
        mean_degree=mean_deg,
        max_degree=max_deg,
        mean_degree_centrality=mean_dc,
        max_degree_centrality=max_dc,
        mean_betweenness=mean_bc,
        max_betweenness=max_bc,
    )
