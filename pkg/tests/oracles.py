"""Independent brute-force oracles the implementation is checked against.

Nothing here shares code paths with the package: triangles come from dense
boolean adjacency, distances from Floyd-Warshall, transport optima from
exhaustive enumeration of basis spanning trees (the vertices of the
transportation polytope), betweenness from the definitional dependency sums.
"""

from __future__ import annotations

import math

import numpy as np


def dense_adjacency(g) -> np.ndarray:
    n = g.node_count
    A = np.zeros((n, n), dtype=bool)
    for i, j in g.edges:
        A[i, j] = True
        A[j, i] = True
    return A


def triangles_bruteforce(A: np.ndarray, i: int, j: int) -> int:
    return int(np.count_nonzero(A[i] & A[j]))


def floyd_warshall(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0.0)
    D[A] = 1.0
    for k in range(n):
        D = np.minimum(D, D[:, k : k + 1] + D[k : k + 1, :])
    return D


def betweenness_bruteforce(g) -> list:
    """Normalized betweenness from path counts over Floyd-Warshall distances."""
    A = dense_adjacency(g)
    n = g.node_count
    D = floyd_warshall(A)
    # sigma[s][t]: number of shortest s-t paths, by dynamic programming on hop level
    sigma = np.zeros((n, n))
    for s in range(n):
        sigma[s][s] = 1.0
        order = sorted((t for t in range(n) if np.isfinite(D[s][t])), key=lambda t: D[s][t])
        for t in order:
            if t == s:
                continue
            sigma[s][t] = sum(sigma[s][w] for w in range(n) if A[w][t] and D[s][w] == D[s][t] - 1)
    bc = [0.0] * n
    for s in range(n):
        for t in range(s + 1, n):
            if not np.isfinite(D[s][t]) or sigma[s][t] == 0:
                continue
            for v in range(n):
                if v in (s, t):
                    continue
                if D[s][v] + D[v][t] == D[s][t]:
                    bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t]
    norm = (n - 1) * (n - 2) / 2.0 if n >= 3 else 1.0
    return [x / norm for x in bc]


def _spanning_trees(m: int, n: int):
    """Every spanning tree of the complete bipartite graph K_{m,n}.

    Yields trees as lists of (row, col) cells, enumerated by backtracking over
    the cell list in index order so each tree appears exactly once.
    """
    cells = [(i, j) for i in range(m) for j in range(n)]
    total = m + n
    need = total - 1
    parent = list(range(total))

    def find(x):
        # no path compression: unions must be reversible on backtrack
        while parent[x] != x:
            x = parent[x]
        return x

    chosen = []

    def rec(start):
        if len(chosen) == need:
            yield list(chosen)
            return
        remaining = len(cells) - start
        if remaining < need - len(chosen):
            return
        for idx in range(start, len(cells)):
            i, j = cells[idx]
            ri, rj = find(i), find(m + j)
            if ri == rj:
                continue
            parent[ri] = rj
            chosen.append((i, j))
            yield from rec(idx + 1)
            chosen.pop()
            parent[ri] = ri

    yield from rec(0)


def _tree_flow_cost(tree, a, b, cost):
    """Basic solution on one spanning tree; (cost, feasible) via leaf stripping."""
    m, n = len(a), len(b)
    total = m + n
    residual = list(a) + list(b)
    adj = [[] for _ in range(total)]
    for k, (i, j) in enumerate(tree):
        adj[i].append((m + j, k))
        adj[m + j].append((i, k))
    deg = [len(x) for x in adj]
    removed = [False] * len(tree)
    leaves = [x for x in range(total) if deg[x] == 1]
    value = 0.0
    feasible = True
    processed = 0
    while processed < len(tree):
        x = leaves.pop()
        if deg[x] != 1:
            continue
        y, edge_k = next((y, k) for y, k in adj[x] if not removed[k])
        flow = residual[x]
        if flow < -1e-9:
            feasible = False
        i, j = tree[edge_k]
        value += flow * cost[i][j]
        residual[y] -= flow
        residual[x] = 0.0
        removed[edge_k] = True
        deg[x] -= 1
        deg[y] -= 1
        if deg[y] == 1:
            leaves.append(y)
        processed += 1
    return value, feasible


def w1_vertex_enumeration(a, b, cost) -> float:
    """Exact W1 as the minimum over all feasible basic solutions (LP vertices)."""
    best = math.inf
    for tree in _spanning_trees(len(a), len(b)):
        value, feasible = _tree_flow_cost(tree, a, b, cost)
        if feasible and value < best:
            best = value
    if not math.isfinite(best):
        raise RuntimeError("no feasible vertex found; inputs not balanced?")
    return best


def orc_oracle(g, i: int, j: int, alpha: float = 0.0) -> float:
    """Ollivier curvature recomputed from scratch: Floyd-Warshall ground costs
    plus exhaustive vertex enumeration for the transport optimum."""
    A = dense_adjacency(g)
    D = floyd_warshall(A)
    def measure(v):
        nbrs = [int(x) for x in np.flatnonzero(A[v])]
        support = list(nbrs)
        mass = [(1.0 - alpha) / len(nbrs)] * len(nbrs)
        if alpha > 0:
            support.append(v)
            mass.append(alpha)
        return support, mass
    sup_i, mass_i = measure(i)
    sup_j, mass_j = measure(j)
    cost = [[float(D[x][y]) for y in sup_j] for x in sup_i]
    return 1.0 - w1_vertex_enumeration(mass_i, mass_j, cost) / float(D[i][j])


def pearson_definitional(x, y) -> float:
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y))
    vx = sum((a - mx) ** 2 for a in x)
    vy = sum((b - my) ** 2 for b in y)
    return cov / math.sqrt(vx * vy)


def rank_average(values) -> list:
    order = sorted(range(len(values)), key=lambda k: values[k])
    ranks = [0.0] * len(values)
    k = 0
    while k < len(order):
        h = k
        while h + 1 < len(order) and values[order[h + 1]] == values[order[k]]:
            h += 1
        avg = (k + h) / 2.0 + 1.0
        for t in range(k, h + 1):
            ranks[order[t]] = avg
        k = h + 1
    return ranks


def spearman_definitional(x, y) -> float:
    return pearson_definitional(rank_average(x), rank_average(y))
