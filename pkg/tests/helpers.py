"""Shared graph builders and independent brute-force oracles for the tests.

The oracles deliberately avoid the library's accumulation algorithms: they
enumerate shortest paths per ordered pair from BFS layer counts, or go through
dense linear algebra (pseudoinverse, reduced determinant).
"""
from collections import deque
from itertools import combinations

import numpy as np

from robustnet.graph import Graph


def path_graph(n: int) -> Graph:
    return Graph.from_edges([(i, i + 1) for i in range(n - 1)], nodes=range(n))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges([(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges([(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges([(0, i) for i in range(1, leaves + 1)])


def barbell_graph(k: int) -> Graph:
    """Two K_k cliques joined by a single bridge edge."""
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    edges += [(i + k, j + k) for i in range(k) for j in range(i + 1, k)]
    edges.append((k - 1, k))
    return Graph.from_edges(edges)


def two_triangles() -> Graph:
    return Graph.from_edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def bridged_triangles() -> Graph:
    """Two triangles joined through a single articulation node (id 6)."""
    return Graph.from_edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 6), (6, 3)])


def gnp(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(edges, nodes=range(n))


def gnp_connected(n: int, p: float, seed: int) -> Graph:
    for attempt in range(200):
        g = gnp(n, p, seed + 1000 * attempt)
        if g.is_connected():
            return g
    raise RuntimeError(f"no connected G({n}, {p}) found")


# -- oracles ------------------------------------------------------------------


def _bfs_layers(g: Graph, s: int):
    dist = {s: 0}
    sigma = {v: 0 for v in g.nodes()}
    sigma[s] = 1
    q = deque([s])
    while q:
        v = q.popleft()
        for w in g.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
    return dist, sigma


def brute_vertex_betweenness(g: Graph) -> dict:
    """Eq-style count: sum over ordered (s, t), s != t != u, of the fraction of
    s-t shortest paths passing through u, counted from BFS layer products."""
    nodes = g.nodes()
    dist = {}
    sigma = {}
    for s in nodes:
        dist[s], sigma[s] = _bfs_layers(g, s)
    scores = {u: 0.0 for u in nodes}
    for s in nodes:
        for t in nodes:
            if s == t or t not in dist[s]:
                continue
            dst = dist[s][t]
            nst = sigma[s][t]
            for u in nodes:
                if u in (s, t) or u not in dist[s] or u not in dist[t]:
                    continue
                if dist[s][u] + dist[t][u] == dst:
                    scores[u] += sigma[s][u] * sigma[t][u] / nst
    return scores


def brute_edge_betweenness(g: Graph) -> dict:
    nodes = g.nodes()
    edges = g.edges()
    dist = {}
    sigma = {}
    for s in nodes:
        dist[s], sigma[s] = _bfs_layers(g, s)
    scores = {e: 0.0 for e in edges}
    for s in nodes:
        for t in nodes:
            if s == t or t not in dist[s]:
                continue
            dst = dist[s][t]
            nst = sigma[s][t]
            for (u, v) in edges:
                paths = 0
                if u in dist[s] and v in dist[t] and dist[s][u] + 1 + dist[t][v] == dst:
                    paths += sigma[s][u] * sigma[t][v]
                if v in dist[s] and u in dist[t] and dist[s][v] + 1 + dist[t][u] == dst:
                    paths += sigma[s][v] * sigma[t][u]
                if paths:
                    scores[(u, v)] += paths / nst
    return scores


def resistance_pinv_oracle(g: Graph) -> float:
    """Total effective resistance as n * trace(pinv(L))."""
    from robustnet.spectral import laplacian_matrix
    lap = laplacian_matrix(g)
    return g.n * float(np.trace(np.linalg.pinv(lap)))


def spanning_trees_det_oracle(g: Graph) -> float:
    """Kirchhoff via the determinant of a reduced Laplacian."""
    from robustnet.spectral import laplacian_matrix
    lap = laplacian_matrix(g)
    return float(np.linalg.det(lap[1:, 1:]))


def exhaustive_best_shield_set(g: Graph, k: int):
    """Argmax Shield-value over all size-k subsets (tiny graphs only)."""
    from robustnet.defenses import shield_value
    from robustnet.spectral import SolverConfig, top_k_adjacency
    spec = top_k_adjacency(g, SolverConfig(k=1, seed=0))
    best, best_set = -np.inf, None
    for subset in combinations(g.nodes(), k):
        sv = shield_value(g, subset, spec)
        if sv > best:
            best, best_set = sv, subset
    return best, best_set
