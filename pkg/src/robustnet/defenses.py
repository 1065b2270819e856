"""Edge-level heuristic defenses and the Shield-value node-monitoring defense.

The five heuristics repair or rewire edges; the optimization defense greedily
selects a monitor set maximizing the Shield-value, which trades eigenvector
centrality mass against an adjacency penalty that keeps the set spread out.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FeasibilityError, ParameterError
from .graph import Graph
from .measures import evaluate
from .attacks import PerturbationTrace
from .spectral import SolverConfig, SpectrumResult, node_index, top_k_adjacency

HEURISTIC_KINDS = ("random_addition", "preferential_addition", "random_edge_rewiring",
                   "random_neighbor_rewiring", "preferential_random_edge_rewiring")
DEFENSE_KINDS = HEURISTIC_KINDS + ("netshield",)

_RESAMPLE_TRIES = 100


@dataclass(frozen=True)
class DefenseStrategy:
    kind: str
    budget: int  # edge actions, or monitored node count for netshield
    seed: int = 0

    def validate(self) -> None:
        if self.kind not in DEFENSE_KINDS:
            raise ParameterError(f"unknown defense kind {self.kind!r}")
        if self.budget < 0:
            raise ParameterError(f"budget must be >= 0, got {self.budget}")


@dataclass(frozen=True)
class MonitoredSet:
    """Greedy Shield-value selection: the set, its score, and the spectral
    radius drop achieved by removing it."""

    nodes: tuple[int, ...]
    shield_value: float
    eigendrop: float


def _random_absent_pair(g: Graph, rng: np.random.Generator) -> tuple[int, int]:
    nodes = g.nodes()
    for _ in range(_RESAMPLE_TRIES):
        u = nodes[rng.integers(len(nodes))]
        v = nodes[rng.integers(len(nodes))]
        if u != v and not g.has_edge(u, v):
            return u, v
    raise FeasibilityError(
        f"no absent node pair found in {_RESAMPLE_TRIES} draws (graph nearly complete)")


def _random_edge(g: Graph, rng: np.random.Generator) -> tuple[int, int]:
    edges = g.edges()
    return edges[rng.integers(len(edges))]


def _apply_one(g: Graph, kind: str, rng: np.random.Generator) -> tuple[Graph, str]:
    if kind in ("random_addition", "preferential_addition") and g.is_complete():
        raise FeasibilityError("cannot add an edge to a complete graph")
    if kind.endswith("rewiring") and g.m < 1:
        raise FeasibilityError("rewiring needs at least one edge")

    if kind == "random_addition":
        u, v = _random_absent_pair(g, rng)
        return g.add_edge(u, v), f"add {u}-{v}"

    if kind == "preferential_addition":
        order = sorted(g.nodes(), key=lambda v: (g.degree(v), v))
        for i, u in enumerate(order):
            for v in order[i + 1:]:
                if not g.has_edge(u, v):
                    return g.add_edge(u, v), f"add {u}-{v}"
        raise FeasibilityError("cannot add an edge to a complete graph")

    if kind == "random_edge_rewiring":
        a, b = _random_edge(g, rng)
        g2 = g.remove_edge(a, b)
        u, v = _random_absent_pair(g2, rng)
        return g2.add_edge(u, v), f"cut {a}-{b} add {u}-{v}"

    if kind == "random_neighbor_rewiring":
        # uniform random node first, then a uniform incident edge: this is not
        # the same distribution as picking a uniform random edge
        nodes = g.nodes()
        for _ in range(_RESAMPLE_TRIES):
            a = nodes[rng.integers(len(nodes))]
            if g.degree(a) > 0:
                nbrs = g.neighbors(a)
                b = nbrs[rng.integers(len(nbrs))]
                g2 = g.remove_edge(a, b)
                u, v = _random_absent_pair(g2, rng)
                return g2.add_edge(u, v), f"cut {a}-{b} add {u}-{v}"
        raise FeasibilityError(f"no node with an incident edge found in {_RESAMPLE_TRIES} draws")

    # preferential_random_edge_rewiring: detach the higher-degree endpoint and
    # reconnect the lower-degree one to a random node
    a, b = _random_edge(g, rng)
    high, low = (a, b) if (g.degree(a), -a) >= (g.degree(b), -b) else (b, a)
    g2 = g.remove_edge(a, b)
    for _ in range(_RESAMPLE_TRIES):
        x = g2.nodes()[rng.integers(g2.n)]
        if x != low and not g2.has_edge(low, x):
            return g2.add_edge(low, x), f"cut {high}-{low} add {low}-{x}"
    raise FeasibilityError(f"no reconnect target for node {low} in {_RESAMPLE_TRIES} draws")


def apply_heuristic_defense(g: Graph, strategy: DefenseStrategy) -> tuple[Graph, list[str]]:
    """Apply ``budget`` edge actions; returns the defended graph and a log of
    the actions taken.  Rewiring conserves m; additions raise it by budget."""
    strategy.validate()
    if strategy.kind not in HEURISTIC_KINDS:
        raise ParameterError("netshield monitors nodes; use netshield_select")
    rng = np.random.default_rng(strategy.seed)
    log: list[str] = []
    work = g
    for _ in range(strategy.budget):
        work, action = _apply_one(work, strategy.kind, rng)
        log.append(action)
    return work, log


def run_defense(g_attacked: Graph, strategy: DefenseStrategy, measure_id: str = "lcc",
                *, k: int | None = None) -> PerturbationTrace:
    """Measure the recovery curve: one point per applied action (higher is a
    stronger defense for LCC-style measures)."""
    strategy.validate()
    if strategy.kind not in HEURISTIC_KINDS:
        raise ParameterError("netshield monitors nodes; use netshield_select")
    rng = np.random.default_rng(strategy.seed)
    kwargs = dict(k=k, seed=strategy.seed, on_error="flag")
    curve = [evaluate(g_attacked, measure_id, **kwargs)]
    actions: list = []
    work = g_attacked
    for _ in range(strategy.budget):
        work, action = _apply_one(work, strategy.kind, rng)
        actions.append(action)
        curve.append(evaluate(work, measure_id, **kwargs))
    return PerturbationTrace(actions, curve)


def shield_value(g: Graph, monitor_set, spectrum: SpectrumResult) -> float:
    """Shield-value of a node set S given the graph's leading eigenpair:

        Sv(S) = sum_{i in S} 2*lambda_1*u1(i)^2 - sum_{i,j in S} A(i,j)*u1(i)*u1(j)

    The second sum runs over ordered pairs, so each edge inside S is penalized
    twice; A(i,i) = 0 makes self terms vanish.
    """
    lam1 = float(spectrum.eigenvalues[0])
    u1 = spectrum.eigenvectors[:, 0]
    idx = node_index(g)
    nodes = [v for v in monitor_set if v in idx]
    if len(nodes) != len(list(monitor_set)):
        raise ParameterError("monitor set contains unknown nodes")
    total = sum(2.0 * lam1 * u1[idx[i]] ** 2 for i in nodes)
    sets = g.neighbor_sets()
    for i in nodes:
        for j in nodes:
            if j in sets[i]:
                total -= u1[idx[i]] * u1[idx[j]]
    return float(total)


def netshield_select(g: Graph, k: int) -> MonitoredSet:
    """Greedy Shield-value maximization over k rounds.

    The leading eigenpair is computed once on the input graph; each round adds
    the node with the best marginal gain 2*lambda_1*u1(i)^2 -
    2*sum_{j in S} A(i,j)*u1(i)*u1(j), ties broken by lowest id.
    """
    if not 1 <= k <= g.n:
        raise ParameterError(f"k must lie in [1, {g.n}], got {k}")
    if not g.is_connected():
        raise DomainError("netshield needs a connected graph (u1 must be positive)")
    spec = top_k_adjacency(g, SolverConfig(k=1, seed=0))
    lam1 = float(spec.eigenvalues[0])
    u1 = spec.eigenvectors[:, 0]
    nodes = g.nodes()
    idx = node_index(g)

    base = 2.0 * lam1 * u1 ** 2
    b = np.zeros(g.n)  # b[i] = sum_{j in S} A(i,j) * u1(j)
    chosen: list[int] = []
    in_set = np.zeros(g.n, dtype=bool)
    for _ in range(k):
        gain = base - 2.0 * b * u1
        gain[in_set] = -np.inf
        pick = int(np.argmax(gain))  # first max = lowest id (nodes are sorted)
        in_set[pick] = True
        chosen.append(nodes[pick])
        for w in g.neighbors(nodes[pick]):
            b[idx[w]] += u1[pick]

    sv = shield_value(g, chosen, spec)
    remaining = g.remove_nodes(chosen)
    if remaining.n == 0 or remaining.m == 0:
        lam_after = 0.0
    else:
        lam_after = float(top_k_adjacency(remaining, SolverConfig(k=1, seed=0)).eigenvalues[0])
    return MonitoredSet(tuple(chosen), sv, lam1 - lam_after)
