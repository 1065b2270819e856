"""Undirected simple-graph container, edge-list ingestion, and synthetic generators.

Node ids are integers. Loaders compact ids to a dense 0..n-1 range (keeping the
original labels around for sidecar emission); mutation helpers return new graph
instances and keep surviving ids stable, so removals may leave gaps.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import EdgeListParseError, ParameterError

INF = math.inf


class Graph:
    """Immutable undirected, unweighted simple graph.

    Invariants: no self-loops, no parallel edges, v in adj(u) iff u in adj(v).
    Instances are safe to share across workers; every mutation returns a copy.
    """

    __slots__ = ("_nbrs", "_m", "_labels", "_sets")

    def __init__(self, adjacency: dict[int, Iterable[int]], labels: tuple[int, ...] | None = None):
        nbrs: dict[int, tuple[int, ...]] = {}
        m2 = 0
        for v in sorted(adjacency):
            ns = sorted(set(adjacency[v]))
            if v in ns:
                raise ParameterError(f"self-loop at node {v}")
            nbrs[v] = tuple(ns)
            m2 += len(ns)
        for v, ns in nbrs.items():
            for u in ns:
                if u not in nbrs or v not in nbrs[u]:
                    raise ParameterError(f"adjacency not symmetric at edge ({v}, {u})")
        self._nbrs = nbrs
        self._m = m2 // 2
        self._labels = labels
        self._sets: dict[int, frozenset[int]] | None = None

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], nodes: Iterable[int] = ()) -> "Graph":
        """Build a graph from an edge iterable, normalizing as an edge list would:
        duplicate edges collapse and self-loops are dropped (their endpoint is kept).
        """
        adj: dict[int, set[int]] = {v: set() for v in nodes}
        for u, v in edges:
            adj.setdefault(u, set())
            adj.setdefault(v, set())
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        return cls(adj)

    @classmethod
    def _from_state(cls, nbrs: dict[int, tuple[int, ...]], m: int, labels) -> "Graph":
        g = cls.__new__(cls)
        g._nbrs = nbrs
        g._m = m
        g._labels = labels
        g._sets = None
        return g

    def __reduce__(self):
        return (Graph._from_state, (self._nbrs, self._m, self._labels))

    # -- basic accessors ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._nbrs)

    @property
    def m(self) -> int:
        return self._m

    @property
    def original_labels(self) -> tuple[int, ...] | None:
        """Pre-compaction labels by dense id, when this graph came from a loader."""
        return self._labels

    def nodes(self) -> list[int]:
        return list(self._nbrs)

    def has_node(self, v: int) -> bool:
        return v in self._nbrs

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._nbrs[v]

    def degree(self, v: int) -> int:
        return len(self._nbrs[v])

    def max_degree(self) -> int:
        return max((len(ns) for ns in self._nbrs.values()), default=0)

    def neighbor_sets(self) -> dict[int, frozenset[int]]:
        if self._sets is None:
            self._sets = {v: frozenset(ns) for v, ns in self._nbrs.items()}
        return self._sets

    def adjacency(self) -> dict[int, tuple[int, ...]]:
        """Read-only adjacency map (node -> sorted neighbor tuple)."""
        return self._nbrs

    def has_edge(self, u: int, v: int) -> bool:
        ns = self._nbrs.get(u)
        return ns is not None and v in self.neighbor_sets()[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in self._nbrs for v in self._nbrs[u] if u < v]

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._nbrs == other._nbrs

    def __hash__(self):
        return hash(tuple((v, ns) for v, ns in self._nbrs.items()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # -- mutation (copy-on-write) -------------------------------------------

    def _mutable_adj(self) -> dict[int, set[int]]:
        return {v: set(ns) for v, ns in self._nbrs.items()}

    def add_edge(self, u: int, v: int) -> "Graph":
        if u == v:
            raise ParameterError(f"self-loop ({u}, {v}) rejected")
        if u not in self._nbrs or v not in self._nbrs:
            raise ParameterError(f"cannot add edge ({u}, {v}): missing node")
        if self.has_edge(u, v):
            raise ParameterError(f"edge ({u}, {v}) already present")
        adj = self._mutable_adj()
        adj[u].add(v)
        adj[v].add(u)
        return Graph(adj)

    def remove_edge(self, u: int, v: int) -> "Graph":
        if not self.has_edge(u, v):
            raise ParameterError(f"edge ({u}, {v}) not present")
        adj = self._mutable_adj()
        adj[u].discard(v)
        adj[v].discard(u)
        return Graph(adj)

    def remove_node(self, v: int) -> "Graph":
        return self.remove_nodes([v])

    def remove_nodes(self, vs: Iterable[int]) -> "Graph":
        drop = set(vs)
        missing = drop - self._nbrs.keys()
        if missing:
            raise ParameterError(f"cannot remove missing node(s) {sorted(missing)}")
        adj = {v: set(ns) - drop for v, ns in self._nbrs.items() if v not in drop}
        return Graph(adj)

    def subgraph(self, keep: Iterable[int]) -> "Graph":
        keep_set = set(keep)
        missing = keep_set - self._nbrs.keys()
        if missing:
            raise ParameterError(f"unknown node(s) {sorted(missing)}")
        adj = {v: set(self._nbrs[v]) & keep_set for v in keep_set}
        return Graph(adj)

    # -- traversal ------------------------------------------------------------

    def bfs_distances(self, source: int) -> dict[int, float]:
        """Hop counts from ``source``; unreachable nodes get math.inf."""
        if source not in self._nbrs:
            raise ParameterError(f"unknown source node {source}")
        dist = {v: INF for v in self._nbrs}
        dist[source] = 0
        q = deque([source])
        while q:
            v = q.popleft()
            dv = dist[v]
            for u in self._nbrs[v]:
                if dist[u] == INF:
                    dist[u] = dv + 1
                    q.append(u)
        return dist

    def connected_components(self) -> list[set[int]]:
        """Components sorted by decreasing size, ties by smallest member id."""
        seen: set[int] = set()
        comps: list[set[int]] = []
        for v in self._nbrs:
            if v in seen:
                continue
            comp = {v}
            q = deque([v])
            seen.add(v)
            while q:
                x = q.popleft()
                for u in self._nbrs[x]:
                    if u not in seen:
                        seen.add(u)
                        comp.add(u)
                        q.append(u)
            comps.append(comp)
        comps.sort(key=lambda c: (-len(c), min(c)))
        return comps

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return len(self.connected_components()) == 1

    def largest_component(self) -> set[int]:
        comps = self.connected_components()
        return comps[0] if comps else set()

    def largest_component_fraction(self, original_n: int | None = None) -> float:
        """|largest component| / n.  ``original_n`` overrides the denominator so
        attack curves stay comparable against the intact node count."""
        denom = self.n if original_n is None else original_n
        if denom == 0:
            return 0.0
        return len(self.largest_component()) / denom

    # -- serialization ---------------------------------------------------------

    def to_edge_list_text(self) -> str:
        """One ``u v`` pair per line with u < v, sorted lexicographically."""
        return "".join(f"{u} {v}\n" for u, v in sorted(self.edges()))


def load_edge_list(text: str | Iterable[str]) -> Graph:
    """Parse a whitespace-delimited edge list into a normalized graph.

    Lines starting with ``#`` and blank lines are ignored.  Every other line
    must hold exactly two integer tokens.  Non-dense node ids are compacted to
    0..n-1 in first-appearance order (already-dense id sets are kept verbatim,
    which makes load-then-serialize a fixed point); the pre-compaction ids are
    kept on ``original_labels``.  Duplicate edges collapse and self-loops are
    dropped (the node is kept).
    """
    lines: Iterator[str] = iter(text.splitlines()) if isinstance(text, str) else iter(text)
    order: list[int] = []
    seen: set[int] = set()
    raw_edges: list[tuple[int, int]] = []

    saw_line = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        saw_line = True
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListParseError(f"expected two tokens, got {len(tokens)}", line=lineno)
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListParseError(f"non-integer token in {line!r}", line=lineno) from None
        for tok in (a, b):
            if tok not in seen:
                seen.add(tok)
                order.append(tok)
        raw_edges.append((a, b))
    if not saw_line:
        raise EdgeListParseError("empty edge list: no edges found")

    if seen == set(range(len(seen))):
        labels = tuple(sorted(seen))
    else:
        labels = tuple(order)
    ids = {orig: dense for dense, orig in enumerate(labels)}
    adj: dict[int, set[int]] = {i: set() for i in range(len(labels))}
    for a, b in raw_edges:
        u, v = ids[a], ids[b]
        if u == v:
            continue
        adj[u].add(v)
        adj[v].add(u)
    return Graph(adj, labels=labels)


@dataclass(frozen=True)
class GeneratorParams:
    """Parameters for the clustered scale-free generator."""

    n: int
    m_attach: int
    p_triangle: float
    seed: int

    def validate(self) -> None:
        if self.n < 1:
            raise ParameterError(f"n must be >= 1, got {self.n}")
        if self.m_attach < 1:
            raise ParameterError(f"m_attach must be >= 1, got {self.m_attach}")
        if not 0.0 <= self.p_triangle <= 1.0:
            raise ParameterError(f"p_triangle must lie in [0, 1], got {self.p_triangle}")
        if self.n < self.m_attach + 1:
            raise ParameterError(f"n must be at least m_attach + 1 ({self.m_attach + 1}), got {self.n}")


def generate_clustered_scale_free(params: GeneratorParams) -> Graph:
    """Grow a clustered scale-free graph by preferential attachment with
    triangle closing.

    Each new node attaches ``m_attach`` edges.  The first is preferential
    (degree-proportional via an endpoint pool); after each attachment, with
    probability ``p_triangle`` the next edge instead closes a triangle with a
    neighbor of the previous target.  Deterministic for a fixed seed; connected
    for m_attach >= 1; every new node contributes exactly m_attach edges.
    """
    params.validate()
    rng = np.random.default_rng(params.seed)
    n, m_attach = params.n, params.m_attach
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    pool: list[int] = []  # one entry per edge endpoint: degree-proportional sampling

    for source in range(m_attach, n):
        chosen: set[int] = set()
        last = None
        while len(chosen) < m_attach:
            target = None
            if last is not None and rng.random() < params.p_triangle:
                cands = sorted(adj[last] - chosen - {source})
                if cands:
                    target = cands[rng.integers(len(cands))]
            if target is None:
                if pool:
                    for _ in range(50):
                        cand = pool[rng.integers(len(pool))]
                        if cand != source and cand not in chosen:
                            target = cand
                            break
                if target is None:
                    cands = sorted(set(range(source)) - chosen)
                    target = cands[rng.integers(len(cands))]
            adj[source].add(target)
            adj[target].add(source)
            chosen.add(target)
            last = target
        pool.extend(chosen)
        pool.extend([source] * m_attach)
    return Graph(adj)


def generate_grid(rows: int, cols: int, n_shortcuts: int = 0, seed: int = 0) -> Graph:
    """Build a rows x cols lattice, optionally with random long-range chords.

    Shortcut endpoints accumulate shortest-path load, giving the heterogeneous
    capacity profile that infrastructure-style cascade studies assume.
    """
    if rows < 1 or cols < 1:
        raise ParameterError("rows and cols must be >= 1")
    if n_shortcuts < 0:
        raise ParameterError("n_shortcuts must be >= 0")
    n = rows * cols
    adj: dict[int, set[int]] = {v: set() for v in range(n)}

    def nid(r: int, c: int) -> int:
        return r * cols + c

    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                adj[nid(r, c)].add(nid(r, c + 1))
                adj[nid(r, c + 1)].add(nid(r, c))
            if r + 1 < rows:
                adj[nid(r, c)].add(nid(r + 1, c))
                adj[nid(r + 1, c)].add(nid(r, c))
    rng = np.random.default_rng(seed)
    added = 0
    attempts = 0
    while added < n_shortcuts and attempts < 100 * max(1, n_shortcuts):
        attempts += 1
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u == v or v in adj[u]:
            continue
        adj[u].add(v)
        adj[v].add(u)
        added += 1
    return Graph(adj)
