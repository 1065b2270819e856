"""Targeted node/edge attack strategies and the perturbation campaign runner.

Five selectors per target kind: random, initial/recalculated degree, and
initial/recalculated betweenness.  ``run_attack`` removes one element at a
time and records the robustness curve against the intact node count.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ParameterError
from .graph import Graph
from .measures import (MeasureResult, edge_betweenness_scores, evaluate,
                       vertex_betweenness_scores)

SELECTORS = ("random", "initial_degree", "recalculated_degree",
             "initial_betweenness", "recalculated_betweenness")
SELECTOR_ALIASES = {"rnd": "random", "id": "initial_degree", "rd": "recalculated_degree",
                    "ib": "initial_betweenness", "rb": "recalculated_betweenness"}


@dataclass(frozen=True)
class AttackStrategy:
    target_kind: str  # "node" | "edge"
    selector: str
    seed: int = 0

    def validate(self) -> None:
        if self.target_kind not in ("node", "edge"):
            raise ParameterError(f"unknown target kind {self.target_kind!r}")
        if self.selector not in SELECTORS:
            raise ParameterError(f"unknown selector {self.selector!r}")


@dataclass
class PerturbationTrace:
    """Ordered removals (or defense actions) plus the measured curve.

    ``curve[0]`` is the intact graph; curve length is actions + 1.
    """

    actions: list
    curve: list[MeasureResult]
    graph_snapshots: list[Graph] | None = None

    @property
    def removed(self) -> list:
        return self.actions

    def values(self) -> list[float]:
        return [r.value for r in self.curve]


def _node_scores(g: Graph, selector: str) -> dict[int, float]:
    if selector.endswith("degree"):
        return {v: float(g.degree(v)) for v in g.nodes()}
    return vertex_betweenness_scores(g).values


def _edge_scores(g: Graph, selector: str) -> dict[tuple[int, int], float]:
    if selector.endswith("degree"):
        # no canonical edge degree exists; rank by the endpoint degree sum
        return {(u, v): float(g.degree(u) + g.degree(v)) for u, v in g.edges()}
    return edge_betweenness_scores(g).values


def _ranked(scores: dict, rng: np.random.Generator) -> list:
    """Targets by descending score; equal-score groups are seed-shuffled over a
    lowest-id-first base order so ensembles stay unbiased but reproducible."""
    items = sorted(scores)
    items.sort(key=lambda t: -scores[t])
    out = []
    i = 0
    while i < len(items):
        j = i
        while j < len(items) and scores[items[j]] == scores[items[i]]:
            j += 1
        group = items[i:j]
        rng.shuffle(group)
        out.extend(group)
        i = j
    return out


def _target_stream(g: Graph, strategy: AttackStrategy, count: int) -> Iterator[tuple[object, Graph]]:
    """Yield (target, graph_after_removal) one element at a time."""
    strategy.validate()
    node_kind = strategy.target_kind == "node"
    available = g.n if node_kind else g.m
    if count < 0:
        raise ParameterError(f"count must be >= 0, got {count}")
    if count > available:
        raise ParameterError(
            f"count {count} exceeds available {strategy.target_kind} targets ({available})")
    rng = np.random.default_rng(strategy.seed)
    score_fn = _node_scores if node_kind else _edge_scores
    recalculated = strategy.selector.startswith("recalculated")

    if strategy.selector == "random":
        targets = sorted(g.nodes()) if node_kind else sorted(g.edges())
        order = [targets[i] for i in rng.permutation(len(targets))[:count]]
    elif not recalculated:
        order = _ranked(score_fn(g, strategy.selector), rng)[:count]
    else:
        order = None

    work = g
    if order is not None:
        for target in order:
            work = work.remove_node(target) if node_kind else work.remove_edge(*target)
            yield target, work
        return

    cached: list | None = None
    for _ in range(count):
        if cached is None:
            cached = _ranked(score_fn(work, strategy.selector), rng)
        target = cached.pop(0)
        if node_kind:
            # removing an isolated node cannot change anyone's score
            keep_ranking = work.degree(target) == 0
            work = work.remove_node(target)
            if not keep_ranking:
                cached = None
        else:
            work = work.remove_edge(*target)
            cached = None
        yield target, work


def select_targets(g: Graph, strategy: AttackStrategy, count: int) -> list:
    """Ordered target list.  Initial selectors rank the intact graph once;
    recalculated selectors re-rank after every removal."""
    return [target for target, _ in _target_stream(g, strategy, count)]


def run_attack(g: Graph, strategy: AttackStrategy, count: int, measure_id: str = "lcc",
               *, k: int | None = None, snapshots: bool = False) -> PerturbationTrace:
    """Remove ``count`` elements one at a time, measuring after each removal.

    The LCC curve uses the intact node count as its denominator so steps stay
    comparable.  Measures that fail on a fragmented graph are recorded as
    flagged NaN values and the campaign continues.
    """
    original_n = g.n
    kwargs = dict(k=k, seed=strategy.seed, lcc_denominator=original_n, on_error="flag")
    curve = [evaluate(g, measure_id, **kwargs)]
    actions: list = []
    shots: list[Graph] | None = [g] if snapshots else None
    for target, after in _target_stream(g, strategy, count):
        actions.append(target)
        curve.append(evaluate(after, measure_id, **kwargs))
        if shots is not None:
            shots.append(after)
    return PerturbationTrace(actions, curve, shots)


def curve_auc(trace: PerturbationTrace) -> float:
    """Trapezoidal area under the curve; lower area = stronger attack."""
    vals = trace.values()
    trapezoid = getattr(np, "trapezoid", np.trapz)
    return float(trapezoid(vals))
