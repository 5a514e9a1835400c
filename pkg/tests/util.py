"""Shared fixture graphs and random generators for the test suite."""

from __future__ import annotations

import numpy as np

from refnet.graph import Graph


def graph_from_edges(edges, n=None, hsa_id="test", year=2017, weights=None):
    """Graph over integer-labelled nodes 0..n-1 given index edge pairs."""
    if n is None:
        n = max((max(i, j) for i, j in edges), default=-1) + 1
    ids = [f"{k:010d}" for k in range(n)]
    if weights is None:
        weights = [1] * len(edges)
    return Graph(ids, [(i, j, w) for (i, j), w in zip(edges, weights)], hsa_id, year)


def complete_graph(n, **kw):
    return graph_from_edges([(i, j) for i in range(n) for j in range(i + 1, n)], n=n, **kw)


def path_graph(n, **kw):
    return graph_from_edges([(i, i + 1) for i in range(n - 1)], n=n, **kw)


def cycle_graph(n, **kw):
    return graph_from_edges([(i, (i + 1) % n) for i in range(n)], n=n, **kw)


def star_graph(leaves, **kw):
    return graph_from_edges([(0, i) for i in range(1, leaves + 1)], n=leaves + 1, **kw)


def dumbbell_graph(**kw):
    """Two hub nodes joined by a bridge, each hub with two pendant leaves."""
    return graph_from_edges([(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)], n=6, **kw)


def two_cliques_bridge(clique_size=4, **kw):
    """Two cliques connected by a single bridge edge between node 0 and node clique_size."""
    edges = []
    for base in (0, clique_size):
        for i in range(clique_size):
            for j in range(i + 1, clique_size):
                edges.append((base + i, base + j))
    edges.append((0, clique_size))
    return graph_from_edges(edges, n=2 * clique_size, **kw)


def k4_minus_edge(**kw):
    return graph_from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)], n=4, **kw)


def er_edges(n, p, seed):
    """Seeded Erdos-Renyi edge list."""
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(n):
        draws = rng.random(n - i - 1)
        for off, u in enumerate(draws):
            if u < p:
                edges.append((i, i + 1 + off))
    return edges


def er_graph(n, p, seed, **kw):
    return graph_from_edges(er_edges(n, p, seed), n=n, **kw)


def gnm_edges(n, m, seed):
    """Seeded graph with exactly m distinct edges on n nodes."""
    rng = np.random.default_rng(seed)
    chosen = set()
    while len(chosen) < m:
        need = m - len(chosen)
        a = rng.integers(0, n, size=2 * need + 8)
        b = rng.integers(0, n, size=2 * need + 8)
        for i, j in zip(a, b):
            if i == j:
                continue
            key = (int(i), int(j)) if i < j else (int(j), int(i))
            chosen.add(key)
            if len(chosen) == m:
                break
    return sorted(chosen)


def gnm_graph(n, m, seed, **kw):
    return graph_from_edges(gnm_edges(n, m, seed), n=n, **kw)


def degree_capped_er_graph(n, p, seed, max_degree, max_tries=2000):
    """First seeded ER draw (seed, seed+1, ...) whose max degree fits the cap."""
    for attempt in range(max_tries):
        edges = er_edges(n, p, seed + attempt)
        deg = [0] * n
        for i, j in edges:
            deg[i] += 1
            deg[j] += 1
        if max(deg, default=0) <= max_degree:
            return graph_from_edges(edges, n=n)
    raise RuntimeError(f"no degree-capped graph found for n={n}, p={p}, cap={max_degree}")


FIXTURE_HSAS = ("dumb", "k3", "rand")


def write_fixture_edges(path):
    """Deterministic 3-HSA x 2-year edge list: a triangle, a dumbbell, a random net."""
    rows = ["npi_a,npi_b,shared_patients,hsa,year"]
    for year in (2016, 2017):
        tri = [("n1", "n2", 12), ("n2", "n3", 13), ("n1", "n3", 14)]
        for a, b, w in tri:
            rows.append(f"{a},{b},{w + (year - 2016)},k3,{year}")
        bell = [("u", "v", 30), ("u", "a", 12), ("u", "b", 12), ("v", "c", 12), ("v", "d", 12)]
        for a, b, w in bell:
            rows.append(f"{a},{b},{w},dumb,{year}")
        rng = np.random.default_rng(year)
        seen = set()
        while len(seen) < 70:
            i, j = sorted(rng.choice(16, size=2, replace=False))
            if (i, j) not in seen:
                seen.add((int(i), int(j)))
                rows.append(f"p{i:02d},p{j:02d},{11 + int(rng.integers(0, 20))},rand,{year}")
        rows.append(f"p00,p99,3,rand,{year}")  # below threshold
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")


def write_fixture_region_map(path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("hsa,state,region\nk3,CA,West\ndumb,GA,Southeast\nrand,MN,Midwest\n")


def write_fixture_census(csv_path, schema_path):
    lines = ["hsa,year,population,nonwhite_population"]
    base = {"k3": (120, 30), "dumb": (400, 260), "rand": (900, 340)}
    for year in (2016, 2017):
        for hsa, (pop, nw) in base.items():
            lines.append(f"{hsa},{year},{pop + year - 2016},{nw}")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    with open(schema_path, "w", encoding="utf-8") as fh:
        fh.write('{"hsa": "text", "year": "text", "population": "numeric", "nonwhite_population": "numeric"}\n')
